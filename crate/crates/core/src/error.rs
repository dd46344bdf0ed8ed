use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("not a face: {0}")]
    NotAFace(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("{what} exceeds cap ({value} > {cap})")]
    CapExceeded { what: &'static str, value: u64, cap: u64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("mixed operands: {0}")]
    Mismatch(String),
    #[error("invalid characteristic matrix: {0}")]
    InvalidCharMatrix(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("witness not found: {0}")]
    WitnessNotFound(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn cap_check(what: &'static str, value: u64, cap: u64) -> Result<()> {
    if value > cap {
        Err(Error::CapExceeded { what, value, cap })
    } else {
        Ok(())
    }
}
