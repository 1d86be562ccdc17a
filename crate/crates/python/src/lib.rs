//! Python bindings: prime contexts, sets over F_p, packing numbers, energies,
//! character sums and the bound checks behind the sweep suites.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use residue_lab::charsum::{char_sum_quadratic_with, complete_quadratic_sum};
use residue_lab::energy::{additive_energy, dft, multiplicative_energy};
use residue_lab::gaps::{gap_stats, s_of_h_with, s_of_set, SetPackingMode, Wrap};
use residue_lab::harness::optimality_probe;
use residue_lab::shifted::{
    q_set, shifted_intersection_add, shifted_intersection_mul, weil_check, ShiftPattern,
};
use residue_lab::structure::max_ap_in_r;
use residue_lab::{BoundCheck, Class};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn check_dict<'py>(py: Python<'py>, c: &BoundCheck) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("p", c.p)?;
    d.set_item("quantity", &c.quantity)?;
    d.set_item("value", c.value)?;
    d.set_item("rhs", c.rhs)?;
    d.set_item("ratio", c.ratio)?;
    d.set_item("pass", c.pass)?;
    d.set_item("paper_tag", &c.tag)?;
    d.set_item("params", &c.params)?;
    Ok(d)
}

fn class_of(c: char) -> PyResult<Class> {
    Class::from_symbol(c).ok_or_else(|| value_err(format!("class must be R or N, got {c:?}")))
}

/// A subset of F_p.
#[pyclass(name = "FpSet", module = "residue_lab", eq, skip_from_py_object)]
#[derive(Debug, Clone, PartialEq)]
struct PyFpSet {
    inner: residue_lab::FpSet,
}

impl From<residue_lab::FpSet> for PyFpSet {
    fn from(inner: residue_lab::FpSet) -> Self {
        Self { inner }
    }
}

impl PyFpSet {
    fn same_field(&self, other: &Self) -> PyResult<()> {
        if self.inner.p() != other.inner.p() {
            return Err(value_err(format!(
                "sets over different fields: p={} and p={}",
                self.inner.p(),
                other.inner.p()
            )));
        }
        Ok(())
    }
}

#[pymethods]
impl PyFpSet {
    #[new]
    #[pyo3(signature = (p, elements = Vec::new()))]
    fn new(p: u64, elements: Vec<u64>) -> PyResult<Self> {
        if p < 2 {
            return Err(value_err("p must be at least 2"));
        }
        residue_lab::FpSet::try_from_elements(p, elements)
            .map(Self::from)
            .map_err(value_err)
    }

    /// Parses `p=<p>; {e1,e2,...}`.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        text.parse::<residue_lab::FpSet>()
            .map(Self::from)
            .map_err(value_err)
    }

    #[staticmethod]
    fn interval(p: u64, start: u64, length: u64) -> Self {
        residue_lab::FpSet::interval(p, start % p, length.min(p)).into()
    }

    #[getter]
    fn p(&self) -> u64 {
        self.inner.p()
    }

    fn elements(&self) -> Vec<u64> {
        self.inner.to_vec()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __contains__(&self, x: u64) -> bool {
        x < self.inner.p() && self.inner.contains(x)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("FpSet({:?})", self.inner.to_string())
    }

    fn union(&self, other: &Self) -> PyResult<Self> {
        self.same_field(other)?;
        Ok(self.inner.union(&other.inner).into())
    }

    fn intersection(&self, other: &Self) -> PyResult<Self> {
        self.same_field(other)?;
        Ok(self.inner.intersection(&other.inner).into())
    }

    fn difference(&self, other: &Self) -> PyResult<Self> {
        self.same_field(other)?;
        Ok(self.inner.difference(&other.inner).into())
    }

    fn complement(&self) -> Self {
        self.inner.complement().into()
    }

    fn shift(&self, s: u64) -> Self {
        self.inner.shift(s % self.inner.p()).into()
    }

    fn dilate(&self, factor: u64) -> PyResult<Self> {
        self.inner.dilate(factor).map(Self::from).map_err(value_err)
    }

    fn sumset(&self, other: &Self) -> PyResult<Self> {
        self.inner
            .sumset(&other.inner)
            .map(Self::from)
            .map_err(value_err)
    }

    fn difference_set(&self, other: &Self) -> PyResult<Self> {
        self.inner
            .difference_set(&other.inner)
            .map(Self::from)
            .map_err(value_err)
    }

    fn product_set(&self, other: &Self) -> PyResult<Self> {
        self.inner
            .product_set(&other.inner)
            .map(Self::from)
            .map_err(value_err)
    }

    fn is_direct_sum(&self, other: &Self) -> PyResult<bool> {
        self.inner.is_direct_sum(&other.inner).map_err(value_err)
    }

    /// Maximal cyclic runs as (start, length) pairs.
    fn runs(&self) -> Vec<(u64, u64)> {
        self.inner
            .runs()
            .runs
            .iter()
            .map(|r| (r.start, r.len))
            .collect()
    }
}

/// Legendre table, R and N for an odd prime p.
#[pyclass(name = "PrimeContext", module = "residue_lab", frozen)]
struct PyPrimeContext {
    inner: residue_lab::PrimeContext,
}

#[pymethods]
impl PyPrimeContext {
    #[new]
    fn new(p: u64) -> PyResult<Self> {
        residue_lab::PrimeContext::new(p)
            .map(|inner| Self { inner })
            .map_err(value_err)
    }

    #[getter]
    fn p(&self) -> u64 {
        self.inner.p()
    }

    fn legendre(&self, x: u64) -> i8 {
        self.inner.legendre(x)
    }

    fn residues(&self) -> PyFpSet {
        self.inner.residues().clone().into()
    }

    fn nonresidues(&self) -> PyFpSet {
        self.inner.nonresidues().clone().into()
    }

    /// Q_{a,b}: x with (x+b)/(x+a) in R, or in N when cls is "N".
    #[pyo3(signature = (a, b, cls = 'R'))]
    fn q_set(&self, a: u64, b: u64, cls: char) -> PyResult<PyFpSet> {
        q_set(&self.inner, a, b, class_of(cls)?)
            .map(PyFpSet::from)
            .map_err(value_err)
    }

    /// maxrun_r, maxrun_n and d_star.
    fn gap_stats<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let g = gap_stats(&self.inner);
        let d = PyDict::new(py);
        d.set_item("maxrun_r", g.maxrun_r)?;
        d.set_item("maxrun_n", g.maxrun_n)?;
        d.set_item("d_star", g.d_star)?;
        Ok(d)
    }

    fn complete_quadratic_sum(&self) -> i64 {
        complete_quadratic_sum(&self.inner)
    }

    /// Σ_{x=s+1}^{s+h} χ((x+a)(x+a+1)) against h(1 - 1/(2d*)) + 4.
    fn char_sum_quadratic<'py>(
        &self,
        py: Python<'py>,
        a: u64,
        s: u64,
        h: u64,
    ) -> PyResult<Bound<'py, PyDict>> {
        if h < 1 || h > self.inner.p() {
            return Err(value_err(format!("h must lie in 1..={}", self.inner.p())));
        }
        let d_star = gap_stats(&self.inner).d_star;
        check_dict(py, &char_sum_quadratic_with(&self.inner, d_star, a, s, h))
    }

    /// |∩ (T_i - s_i)| against p/2^{k+1} + k√p; `classes` has one R/N per
    /// factor, unshifted factor first.
    #[pyo3(signature = (shifts, classes = None))]
    fn weil_check<'py>(
        &self,
        py: Python<'py>,
        shifts: Vec<u64>,
        classes: Option<&str>,
    ) -> PyResult<Bound<'py, PyDict>> {
        let classes: Vec<Class> = match classes {
            Some(text) => text.chars().map(class_of).collect::<PyResult<_>>()?,
            None => vec![Class::R; shifts.len() + 1],
        };
        let pattern =
            ShiftPattern::normalized(self.inner.p(), &shifts, &classes).map_err(value_err)?;
        check_dict(py, &weil_check(&self.inner, &pattern))
    }

    /// |R⁺_{[h]}| at h = round(½ log p - log(C log p)).
    fn optimality_probe<'py>(&self, py: Python<'py>, c: f64) -> PyResult<Bound<'py, PyDict>> {
        let check = optimality_probe(&self.inner, c).map_err(value_err)?;
        check_dict(py, &check)
    }

    /// Longest arithmetic progression inside R as (length, step, base).
    fn max_ap_in_r(&self) -> PyResult<(u64, u64, u64)> {
        let ap = max_ap_in_r(&self.inner).map_err(value_err)?;
        Ok((ap.len, ap.step, ap.base))
    }
}

/// A⁺_S = A ∩ (A - s_1) ∩ ... ∩ (A - s_k)
#[pyfunction]
fn shifted_intersection(a: &PyFpSet, shifts: Vec<u64>, multiplicative: bool) -> PyResult<PyFpSet> {
    if multiplicative {
        shifted_intersection_mul(&a.inner, &shifts)
            .map(PyFpSet::from)
            .map_err(value_err)
    } else {
        Ok(shifted_intersection_add(&a.inner, &shifts).into())
    }
}

/// S(h) of the target: (value, witness).
#[pyfunction]
#[pyo3(signature = (target, h, linear = false))]
fn s_of_h(target: &PyFpSet, h: u64, linear: bool) -> PyResult<(usize, PyFpSet)> {
    let wrap = if linear { Wrap::Linear } else { Wrap::Cyclic };
    let res = s_of_h_with(&target.inner, h, "T", wrap).map_err(value_err)?;
    Ok((res.value, res.witness.into()))
}

/// S(A) of the target: (value, witness, exact).
#[pyfunction]
#[pyo3(signature = (target, pattern, exact = true))]
fn s_of_pattern(
    target: &PyFpSet,
    pattern: &PyFpSet,
    exact: bool,
) -> PyResult<(usize, PyFpSet, bool)> {
    let mode = if exact {
        SetPackingMode::Exact
    } else {
        SetPackingMode::Greedy
    };
    let res = s_of_set(&target.inner, &pattern.inner, mode, "T").map_err(value_err)?;
    Ok((res.value, res.witness.into(), res.exact))
}

#[pyfunction]
#[pyo3(name = "additive_energy", signature = (a, b = None))]
fn py_additive_energy(a: &PyFpSet, b: Option<&PyFpSet>) -> PyResult<u128> {
    let b = b.unwrap_or(a);
    additive_energy(&a.inner, &b.inner)
        .map(|r| r.value)
        .map_err(value_err)
}

#[pyfunction]
#[pyo3(name = "multiplicative_energy", signature = (a, b = None))]
fn py_multiplicative_energy(a: &PyFpSet, b: Option<&PyFpSet>) -> PyResult<u128> {
    let b = b.unwrap_or(a);
    multiplicative_energy(&a.inner, &b.inner)
        .map(|r| r.value)
        .map_err(value_err)
}

/// Direct DFT of a real sequence, as complex numbers.
#[pyfunction]
#[pyo3(name = "dft")]
fn py_dft(values: Vec<f64>) -> PyResult<Vec<num_complex::Complex64>> {
    let f: Vec<num_complex::Complex64> = values
        .into_iter()
        .map(|v| num_complex::Complex64::new(v, 0.0))
        .collect();
    dft(&f).map_err(value_err)
}

#[pymodule]
#[pyo3(name = "residue_lab")]
fn residue_lab_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFpSet>()?;
    m.add_class::<PyPrimeContext>()?;
    m.add_function(wrap_pyfunction!(shifted_intersection, m)?)?;
    m.add_function(wrap_pyfunction!(s_of_h, m)?)?;
    m.add_function(wrap_pyfunction!(s_of_pattern, m)?)?;
    m.add_function(wrap_pyfunction!(py_additive_energy, m)?)?;
    m.add_function(wrap_pyfunction!(py_multiplicative_energy, m)?)?;
    m.add_function(wrap_pyfunction!(py_dft, m)?)?;
    Ok(())
}
