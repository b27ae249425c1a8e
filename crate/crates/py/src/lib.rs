//! Python bindings. Rationals cross the boundary as `"p/q"` strings; structured
//! results come back as plain dicts and lists.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

use hkrr_core::cnconst::{cn_value, DEFAULT_MAX_BOUND, DEFAULT_STABILITY};
use hkrr_core::exactpoly::{Poly, Rat};
use hkrr_core::hkprofile::{known_family_prr, profile_from_prr, Family};
use hkrr_core::isosolver;
use hkrr_core::nwformula::ChernData;
use hkrr_core::qkbasis;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<T: Serialize>(py: Python<'_>, v: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(v).map_err(value_error)?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

fn parse_rat(s: &str) -> PyResult<Rat> {
    s.parse().map_err(value_error)
}

/// Exact polynomial over the rationals, lowest degree first.
#[pyclass(name = "Poly", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyPoly(Poly);

#[pymethods]
impl PyPoly {
    #[new]
    fn new(coeffs: Vec<String>) -> PyResult<Self> {
        let cs = coeffs.iter().map(|c| parse_rat(c)).collect::<PyResult<Vec<_>>>()?;
        Ok(PyPoly(Poly::new(cs)))
    }

    fn coeffs(&self) -> Vec<String> {
        self.0.coeffs().iter().map(Rat::to_string).collect()
    }

    fn degree(&self) -> Option<usize> {
        self.0.degree()
    }

    fn eval(&self, x: &str) -> PyResult<String> {
        Ok(self.0.eval(&parse_rat(x)?).to_string())
    }

    /// `p(a T + b)`.
    fn compose_affine(&self, a: &str, b: &str) -> PyResult<PyPoly> {
        Ok(PyPoly(self.0.compose_affine(&parse_rat(a)?, &parse_rat(b)?)))
    }

    /// `s` with `p(-T - s) = (-1)^deg p(T)`, if any.
    fn symmetry_shift(&self) -> Option<String> {
        self.0.symmetry_shift().map(|s| s.to_string())
    }

    fn __eq__(&self, other: &PyPoly) -> bool {
        self.0 == other.0
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Poly({:?})", self.coeffs())
    }
}

#[pyfunction]
#[pyo3(signature = (n, stability = DEFAULT_STABILITY, max_bound = DEFAULT_MAX_BOUND))]
fn cn(py: Python<'_>, n: u32, stability: u32, max_bound: u64) -> PyResult<Py<PyAny>> {
    let cert = py
        .detach(|| cn_value(n, stability, max_bound))
        .map_err(value_error)?;
    to_py(py, &cert)
}

#[pyfunction]
fn qk_poly(k: u32) -> PyPoly {
    PyPoly(qkbasis::qk_poly(k))
}

#[pyfunction]
fn qk_roots(k: u32) -> PyResult<Vec<f64>> {
    qkbasis::qk_roots(k).map_err(value_error)
}

#[pyfunction]
fn decompose_qk(p: &PyPoly) -> PyResult<Vec<String>> {
    let b = qkbasis::decompose_qk(&p.0).map_err(value_error)?;
    Ok(b.iter().map(Rat::to_string).collect())
}

#[pyfunction]
fn known_family(family: &str, n: u32) -> PyResult<PyPoly> {
    let kind: Family = family.parse().map_err(value_error)?;
    Ok(PyPoly(known_family_prr(kind, n)))
}

#[pyfunction]
fn profile(py: Python<'_>, n: u32, p: &PyPoly) -> PyResult<Py<PyAny>> {
    let prof = profile_from_prr(n, &p.0).map_err(value_error)?;
    to_py(py, &prof)
}

/// `chern` maps partitions (tuples of positive integers) to rational strings.
#[pyfunction]
fn q_rr_from_chern(n: u32, chern: Vec<(Vec<u32>, String)>) -> PyResult<PyPoly> {
    let mut data = ChernData::new(n).map_err(value_error)?;
    for (parts, value) in chern {
        data.insert(parts, parse_rat(&value)?).map_err(value_error)?;
    }
    Ok(PyPoly(hkrr_core::nwformula::q_rr_from_chern(&data)))
}

#[pyfunction]
#[pyo3(signature = (n, a, even = None))]
fn solve_case(py: Python<'_>, n: u32, a: u64, even: Option<bool>) -> PyResult<Py<PyAny>> {
    let case = py
        .detach(|| isosolver::solve_case_with_parity(n, a, even))
        .map_err(value_error)?;
    to_py(py, &case)
}

#[pymodule]
fn hkrr(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPoly>()?;
    m.add_function(wrap_pyfunction!(cn, m)?)?;
    m.add_function(wrap_pyfunction!(qk_poly, m)?)?;
    m.add_function(wrap_pyfunction!(qk_roots, m)?)?;
    m.add_function(wrap_pyfunction!(decompose_qk, m)?)?;
    m.add_function(wrap_pyfunction!(known_family, m)?)?;
    m.add_function(wrap_pyfunction!(profile, m)?)?;
    m.add_function(wrap_pyfunction!(q_rr_from_chern, m)?)?;
    m.add_function(wrap_pyfunction!(solve_case, m)?)?;
    Ok(())
}
