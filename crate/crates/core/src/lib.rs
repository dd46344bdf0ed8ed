//! Combinatorial and homological tools for moment-angle complexes.
//!
//! Simplicial complexes live on vertices `0..m` internally; the JSON wire
//! format and all user-facing output use 1-based labels.

pub mod algebra;
pub mod bhr;
pub mod complex;
pub mod constructions;
pub mod error;
pub mod face_set;
pub mod field;
pub mod fingerprint;
pub mod hochster;
pub mod homology;
pub mod iso;
pub mod linalg;
pub mod properties;
pub mod taylor;
pub mod toric;

pub use complex::{Complex, ComplexJson};
pub use error::{Error, Result};
pub use face_set::FaceSet;
pub use field::{Field, FieldKind, Fp, Rationals};
