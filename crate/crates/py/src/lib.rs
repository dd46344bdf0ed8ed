use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use macx::bhr::BhrRing;
use macx::fingerprint::{fingerprint, FingerprintOptions};
use macx::hochster::{bigraded_betti, SweepOptions};
use macx::properties::{self, DEFAULT_SCC_CAP};
use macx::taylor::{tor_dims_via_taylor, TaylorOptions};
use macx::toric::{self, CharMatrix};
use macx::{constructions, with_field, Complex, Error, FieldKind};

create_exception!(macx_py, CapExceeded, PyRuntimeError);

fn py_err(e: Error) -> PyErr {
    match e {
        Error::CapExceeded { .. } => CapExceeded::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn parse_field(field: &str) -> PyResult<FieldKind> {
    field.parse().map_err(py_err)
}

/// A simplicial complex on vertices `1..=m`.
#[pyclass(name = "SimplicialComplex", frozen)]
pub struct PyComplex {
    inner: Complex,
}

#[pymethods]
impl PyComplex {
    #[new]
    fn new(m: usize, facets: Vec<Vec<usize>>) -> PyResult<Self> {
        let inner = Complex::from_json(&macx::ComplexJson { m, facets }).map_err(py_err)?;
        Ok(PyComplex { inner })
    }

    #[staticmethod]
    fn catalog(name: &str) -> PyResult<Self> {
        Ok(PyComplex { inner: constructions::catalog(name).map_err(py_err)? })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyComplex { inner: Complex::from_json_str(text).map_err(py_err)? })
    }

    fn to_json(&self) -> String {
        self.inner.to_json_string()
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    #[getter]
    fn dim(&self) -> isize {
        self.inner.dim()
    }

    #[getter]
    fn facets(&self) -> Vec<Vec<usize>> {
        self.inner.to_json().facets
    }

    fn f_vector(&self) -> Vec<usize> {
        self.inner.f_vector()
    }

    fn missing_faces(&self) -> Vec<Vec<usize>> {
        self.inner.missing_faces().iter().map(|s| s.iter().map(|v| v + 1).collect()).collect()
    }

    /// Nonzero `β^{-i,2j}` as `(i, j, rank)`.
    #[pyo3(signature = (field = "gf2", oracle = "hochster"))]
    fn betti(&self, py: Python<'_>, field: &str, oracle: &str) -> PyResult<Vec<(usize, usize, usize)>> {
        let f = parse_field(field)?;
        let k = &self.inner;
        let table = py.detach(|| match oracle {
            "hochster" => Ok(bigraded_betti(k, f, SweepOptions::default())),
            "taylor" => Ok(tor_dims_via_taylor(k, f, TaylorOptions::default(), false)),
            other => Err(other.to_string()),
        });
        let table = table.map_err(|o| PyValueError::new_err(format!("unknown oracle `{o}`")))?.map_err(py_err)?;
        Ok(table.ranks.iter().map(|(&(i, j), &r)| (i, j, r)).collect())
    }

    fn is_flag(&self) -> bool {
        properties::is_flag(&self.inner)
    }

    fn is_suspension(&self) -> bool {
        properties::is_suspension(&self.inner)
    }

    /// All combinatorial predicates as a JSON string.
    #[pyo3(signature = (field = "gf2", scc_cap = DEFAULT_SCC_CAP))]
    fn props(&self, py: Python<'_>, field: &str, scc_cap: u64) -> PyResult<String> {
        let f = parse_field(field)?;
        let k = &self.inner;
        let r = py.detach(|| properties::props_report(k, f, scc_cap, None)).map_err(py_err)?;
        Ok(serde_json::to_string(&r).expect("serialisable"))
    }

    #[pyo3(signature = (field = "gf2"))]
    fn nilpotence_length(&self, py: Python<'_>, field: &str) -> PyResult<usize> {
        let f = parse_field(field)?;
        let k = self.inner.clone();
        py.detach(|| with_field!(f, |fld| BhrRing::new(fld, k).nilpotence_length())).map_err(py_err)
    }

    /// Ring fingerprint as a JSON string.
    #[pyo3(signature = (field = "gf2"))]
    fn fingerprint(&self, py: Python<'_>, field: &str) -> PyResult<String> {
        let f = parse_field(field)?;
        let k = &self.inner;
        let fp = py.detach(|| fingerprint(k, f, FingerprintOptions::default())).map_err(py_err)?;
        Ok(fp.to_json_value().to_string())
    }

    fn h_vector(&self) -> PyResult<Vec<i64>> {
        toric::h_vector(&self.inner).map_err(py_err)
    }

    /// Whether the integer matrix (given by columns) is characteristic.
    #[pyo3(signature = (columns, strict = false))]
    fn is_characteristic(&self, columns: Vec<Vec<i64>>, strict: bool) -> PyResult<bool> {
        let n = columns.first().map_or(0, |c| c.len());
        let lam = CharMatrix::new(n, columns).map_err(py_err)?;
        Ok(toric::validate_characteristic(&self.inner, &lam, strict).map_err(py_err)?.valid)
    }

    fn __repr__(&self) -> String {
        format!("SimplicialComplex(m={}, facets={})", self.inner.m(), self.inner.facets().len())
    }
}

#[pymodule]
pub fn macx_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyComplex>()?;
    m.add("CapExceeded", m.py().get_type::<CapExceeded>())?;
    Ok(())
}
