//! Python bindings. Field elements cross the boundary as their packed integer
//! form (`Element::raw`); structured results come back as plain dicts.

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

use fqsparse::coset::bounds_report;
use fqsparse::families::{
    make_cyclotomic_quotient, make_g, make_h, make_r, verify_family, FamilyInstance,
};
use fqsparse::search::{brute_oracle_max, max_roots_for_prime, p_n_table, search_range};
use fqsparse::search::{Convention, SearchLog, SearchOptions};
use fqsparse::{make_field, number_theory, Element, Error, Field as CoreField, SparsePolynomial};

create_exception!(fqsparse, CapabilityError, PyException, "A configured size budget was exceeded.");

fn py_err(e: Error) -> PyErr {
    if e.is_capability() {
        CapabilityError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn convention(name: &str) -> PyResult<Convention> {
    name.parse().map_err(py_err)
}

/// The finite field `F_{p^k}`.
#[pyclass(frozen, name = "Field", module = "fqsparse")]
pub struct PyField {
    inner: CoreField,
}

impl PyField {
    fn element(&self, raw: u64) -> PyResult<Element> {
        self.inner.element(raw).map_err(py_err)
    }
}

#[pymethods]
impl PyField {
    #[new]
    #[pyo3(signature = (p, k = 1))]
    fn new(p: u64, k: u32) -> PyResult<Self> {
        Ok(PyField {
            inner: make_field(p, k).map_err(py_err)?,
        })
    }

    #[getter]
    fn p(&self) -> u64 {
        self.inner.p()
    }

    #[getter]
    fn k(&self) -> u32 {
        self.inner.k()
    }

    #[getter]
    fn q(&self) -> u64 {
        self.inner.q()
    }

    /// Modulus coefficients, constant term first, or `None` for a prime field.
    #[getter]
    fn modulus(&self) -> Option<Vec<u64>> {
        self.inner.modulus().map(<[u64]>::to_vec)
    }

    fn generator(&self) -> u64 {
        self.inner.generator().raw()
    }

    fn add(&self, a: u64, b: u64) -> PyResult<u64> {
        Ok(self.inner.add(self.element(a)?, self.element(b)?).raw())
    }

    fn sub(&self, a: u64, b: u64) -> PyResult<u64> {
        Ok(self.inner.sub(self.element(a)?, self.element(b)?).raw())
    }

    fn mul(&self, a: u64, b: u64) -> PyResult<u64> {
        Ok(self.inner.mul(self.element(a)?, self.element(b)?).raw())
    }

    fn pow(&self, a: u64, e: i64) -> PyResult<u64> {
        Ok(self.inner.pow(self.element(a)?, e).map_err(py_err)?.raw())
    }

    fn inv(&self, a: u64) -> PyResult<u64> {
        Ok(self.inner.inv(self.element(a)?).map_err(py_err)?.raw())
    }

    fn dlog(&self, a: u64) -> PyResult<u64> {
        self.inner.dlog(self.element(a)?).map_err(py_err)
    }

    /// Coordinates of an element over `F_p`, constant term first.
    fn coeffs(&self, a: u64) -> PyResult<Vec<u64>> {
        Ok(self.inner.coeffs(self.element(a)?))
    }

    #[allow(clippy::wrong_self_convention)]
    fn from_coeffs(&self, coeffs: Vec<u64>) -> PyResult<u64> {
        Ok(self.inner.from_coeffs(&coeffs).map_err(py_err)?.raw())
    }

    fn format(&self, a: u64) -> PyResult<String> {
        Ok(self.inner.format(self.element(a)?))
    }

    fn __repr__(&self) -> String {
        format!("Field(p={}, k={})", self.inner.p(), self.inner.k())
    }
}

/// A sparse polynomial over a `Field`.
#[pyclass(frozen, name = "Polynomial", module = "fqsparse")]
pub struct PyPolynomial {
    inner: SparsePolynomial,
}

#[pymethods]
impl PyPolynomial {
    /// Parses text such as `"1 + 4x - 5x^8"`, or takes `(exponent, int)` pairs.
    #[new]
    fn new(field: &PyField, spec: &Bound<'_, PyAny>) -> PyResult<Self> {
        let inner = if let Ok(text) = spec.extract::<String>() {
            SparsePolynomial::parse(field.inner.clone(), &text)
        } else {
            let terms: Vec<(u64, i64)> = spec.extract()?;
            SparsePolynomial::from_int_terms(field.inner.clone(), &terms)
        }
        .map_err(py_err)?;
        Ok(PyPolynomial { inner })
    }

    #[getter]
    fn t(&self) -> usize {
        self.inner.t()
    }

    #[getter]
    fn degree(&self) -> u64 {
        self.inner.degree()
    }

    #[getter]
    fn exponents(&self) -> Vec<u64> {
        self.inner.exponents()
    }

    #[getter]
    fn field(&self) -> PyField {
        PyField {
            inner: self.inner.field().clone(),
        }
    }

    fn evaluate(&self, x: u64) -> PyResult<u64> {
        let a = self.inner.field().element(x).map_err(py_err)?;
        Ok(self.inner.evaluate(a).raw())
    }

    /// All roots in the field (including 0 when it is one), ascending.
    fn roots(&self) -> PyResult<Vec<u64>> {
        let z = self.inner.roots_in_units().map_err(py_err)?;
        let mut out: Vec<u64> = z.roots.iter().map(|r| r.raw()).collect();
        if self.inner.includes_zero() {
            out.insert(0, 0);
        }
        Ok(out)
    }

    /// Root count, coset invariants and every applicable root bound.
    fn coset_report<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &bounds_report(&self.inner).map_err(py_err)?)
    }

    fn __repr__(&self) -> String {
        format!("Polynomial({})", self.inner)
    }
}

fn family(kind: &str, a: u64, b: u64, c: Option<u64>) -> PyResult<FamilyInstance> {
    let tup = || -> PyResult<(u32, u32, u64)> {
        let p = c.ok_or_else(|| PyValueError::new_err("r and g take (t, u, p)"))?;
        Ok((a as u32, b as u32, p))
    };
    match kind {
        "r" => {
            let (t, u, p) = tup()?;
            make_r(t, u, p)
        }
        "g" => {
            let (t, u, p) = tup()?;
            make_g(t, u, p)
        }
        "h" => make_h(a, b),
        "cyclo" | "cyclotomic" => make_cyclotomic_quotient(a, b),
        other => return Err(PyValueError::new_err(format!("unknown family {other:?}"))),
    }
    .map_err(py_err)
}

/// Builds a family member: `("r"|"g", t, u, p)`, `("h", n, p)` or
/// `("cyclo", q, t)`.
#[pyfunction]
#[pyo3(signature = (kind, a, b, c = None))]
fn make_family(kind: &str, a: u64, b: u64, c: Option<u64>) -> PyResult<PyPolynomial> {
    Ok(PyPolynomial {
        inner: family(kind, a, b, c)?.polynomial,
    })
}

/// Enumerates a family member and checks its closed-form claims.
#[pyfunction(name = "verify_family")]
#[pyo3(signature = (kind, a, b, c = None))]
fn py_verify_family<'py>(py: Python<'py>, kind: &str, a: u64, b: u64, c: Option<u64>) -> PyResult<Bound<'py, PyAny>> {
    let instance = family(kind, a, b, c)?;
    to_py(py, &verify_family(&instance).map_err(py_err)?)
}

#[pyfunction(name = "max_roots_for_prime")]
#[pyo3(signature = (p, convention = "strict"))]
fn py_max_roots<'py>(py: Python<'py>, p: u64, convention: &str) -> PyResult<Bound<'py, PyAny>> {
    let conv = self::convention(convention)?;
    let record = py.detach(|| max_roots_for_prime(p, conv)).map_err(py_err)?;
    to_py(py, &record)
}

#[pyfunction(name = "brute_oracle_max")]
#[pyo3(signature = (p, convention = "strict"))]
fn py_brute_oracle<'py>(py: Python<'py>, p: u64, convention: &str) -> PyResult<Bound<'py, PyAny>> {
    let conv = self::convention(convention)?;
    to_py(py, &brute_oracle_max(p, conv).map_err(py_err)?)
}

/// `[(n, p_n, witness)]` from an exhaustive search up to `pmax`.
#[pyfunction]
#[pyo3(signature = (n_max, pmax, convention = "extended"))]
fn pn_table<'py>(py: Python<'py>, n_max: u64, pmax: u64, convention: &str) -> PyResult<Bound<'py, PyAny>> {
    let options = SearchOptions {
        convention: self::convention(convention)?,
        ..Default::default()
    };
    let rows = py
        .detach(|| {
            let mut log = SearchLog::in_memory();
            search_range(2, pmax, &options, &mut log)?;
            Ok::<_, Error>(p_n_table(&log, options.convention, n_max))
        })
        .map_err(py_err)?;
    to_py(py, &rows)
}

#[pyfunction]
fn swan_resultant(n: u32) -> PyResult<String> {
    Ok(number_theory::swan_resultant(n).map_err(py_err)?.to_string())
}

/// Resultant of two integer polynomials given as coefficient lists, constant
/// term first, returned as a decimal string.
#[pyfunction]
fn sylvester_resultant(f: Vec<i64>, g: Vec<i64>) -> PyResult<String> {
    let f = number_theory::BigPoly::from_i64(&f).map_err(py_err)?;
    let g = number_theory::BigPoly::from_i64(&g).map_err(py_err)?;
    Ok(number_theory::sylvester_resultant(&f, &g).to_string())
}

#[pyfunction]
fn least_split_prime(py: Python<'_>, n: u64, pmax: u64) -> PyResult<u64> {
    py.detach(|| number_theory::least_split_prime(n, pmax)).map_err(py_err)
}

#[pyfunction]
fn check_inequalities<'py>(py: Python<'py>, n_max: u32) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &number_theory::proof_inequalities(n_max).map_err(py_err)?)
}

#[pymodule(name = "fqsparse")]
mod fqsparse_module {
    #[pymodule_export]
    use super::{
        check_inequalities, least_split_prime, make_family, pn_table, py_brute_oracle, py_max_roots,
        py_verify_family, swan_resultant, sylvester_resultant, CapabilityError, PyField, PyPolynomial,
    };

    use pyo3::prelude::*;

    #[pymodule_init]
    fn init(m: &Bound<'_, PyModule>) -> PyResult<()> {
        m.add("__version__", fqsparse::report::TOOL_VERSION)
    }
}
