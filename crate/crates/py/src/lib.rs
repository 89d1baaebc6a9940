//! Python bindings: operators, Weyl elements, connection systems and the
//! main regularity tests. Reports come back as plain dicts and lists.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyAny;

use dreg_core::algebra::Budget;
use dreg_core::corpus::CORPUS;
use dreg_core::dmod::{characteristic_variety, fuchs_kashiwara_equivalence, kashiwara_regular_at};
use dreg_core::parse::{infer_nvars, parse_chart, parse_point, parse_system, parse_univar, parse_weyl};
use dreg_core::polelattice::{pole_filtration_annihilator, prop21_inclusion, theorem_forward_filtration, NCChart};
use dreg_core::regularity::{
    fuchs_regular_at, newton_polygon, regular_on_projective_line, theta_regular_at, UnivarOperator as CoreOp,
};
use dreg_core::systems::{regular_system_report, saturate_lattice, ConnectionSystem};
use dreg_core::weyl::{characteristic_ideal, WeylElement as CoreWeyl};
use dreg_core::Error;

create_exception!(dreg, DregError, PyValueError);
create_exception!(dreg, BudgetExceeded, DregError);
create_exception!(dreg, Contradiction, DregError);

fn err(e: Error) -> PyErr {
    match e {
        Error::BudgetExceeded { .. } => BudgetExceeded::new_err(e.to_string()),
        Error::Contradiction(_) => Contradiction::new_err(e.to_string()),
        _ => DregError::new_err(e.to_string()),
    }
}

trait OrPy<T> {
    fn py_err(self) -> PyResult<T>;
}

impl<T> OrPy<T> for dreg_core::Result<T> {
    fn py_err(self) -> PyResult<T> {
        self.map_err(err)
    }
}

/// Serializes through JSON into Python objects.
fn to_py<'py>(py: Python<'py>, v: &impl serde::Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(v).map_err(|e| DregError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn verdict(regular: bool) -> &'static str {
    if regular {
        "regular"
    } else {
        "irregular"
    }
}

/// Differential operator in one variable with rational-function coefficients.
#[pyclass(module = "dreg", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct Operator {
    inner: CoreOp,
}

#[pymethods]
impl Operator {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(Operator {
            inner: parse_univar(text).py_err()?,
        })
    }

    #[getter]
    fn order(&self) -> Option<usize> {
        self.inner.order()
    }

    fn coefficients(&self) -> Vec<String> {
        self.inner.coeffs().iter().map(|c| c.to_string()).collect()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Operator('{}')", self.inner)
    }

    fn __add__(&self, other: &Operator) -> Operator {
        Operator { inner: &self.inner + &other.inner }
    }

    fn __sub__(&self, other: &Operator) -> Operator {
        Operator { inner: &self.inner - &other.inner }
    }

    /// Composition `self ∘ other`.
    fn __mul__(&self, other: &Operator) -> Operator {
        Operator { inner: &self.inner * &other.inner }
    }

    #[pyo3(signature = (point = "0"))]
    fn fuchs(&self, point: &str) -> PyResult<&'static str> {
        let c = fuchs_regular_at(&self.inner, &parse_point(point).py_err()?).py_err()?;
        Ok(verdict(c.verdict.is_regular()))
    }

    #[pyo3(signature = (point = "0"))]
    fn theta(&self, point: &str) -> PyResult<&'static str> {
        Ok(verdict(theta_regular_at(&self.inner, &parse_point(point).py_err()?).py_err()?.regular))
    }

    #[pyo3(signature = (point = "0"))]
    fn kashiwara(&self, point: &str) -> PyResult<&'static str> {
        Ok(verdict(kashiwara_regular_at(&self.inner, &parse_point(point).py_err()?).py_err()?.regular))
    }

    /// Slope magnitudes of the Newton polygon, as strings like `"1/2"`.
    #[pyo3(signature = (point = "0"))]
    fn newton_slopes(&self, point: &str) -> PyResult<Vec<String>> {
        let np = newton_polygon(&self.inner, &parse_point(point).py_err()?).py_err()?;
        Ok(np.slopes.iter().map(dreg_core::algebra::fmt_rat).collect())
    }

    /// Both certificates; raises `Contradiction` if they disagree.
    #[pyo3(signature = (point = "0"))]
    fn compare<'py>(&self, py: Python<'py>, point: &str) -> PyResult<Bound<'py, PyAny>> {
        let r = fuchs_kashiwara_equivalence(&self.inner, &parse_point(point).py_err()?).py_err()?;
        to_py(py, &r)
    }

    /// Fuchs test at every rational singular point and at infinity.
    fn projective_line<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &regular_on_projective_line(&self.inner).py_err()?)
    }

    fn companion(&self) -> PyResult<System> {
        Ok(System {
            inner: ConnectionSystem::companion(&self.inner).py_err()?,
        })
    }
}

/// Element of the Weyl algebra `A_n`.
#[pyclass(module = "dreg", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct WeylElement {
    inner: CoreWeyl,
}

#[pymethods]
impl WeylElement {
    #[new]
    #[pyo3(signature = (text, n = None))]
    fn new(text: &str, n: Option<usize>) -> PyResult<Self> {
        let n = match n {
            Some(n) => n,
            None => infer_nvars(text).py_err()?,
        };
        let mut v = parse_weyl(text, n).py_err()?;
        if v.len() != 1 {
            return Err(DregError::new_err("expected one element; use characteristic() for lists"));
        }
        Ok(WeylElement { inner: v.pop().unwrap() })
    }

    #[getter]
    fn nvars(&self) -> usize {
        self.inner.nvars()
    }

    #[getter]
    fn order(&self) -> Option<u32> {
        self.inner.order()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("WeylElement('{}', n={})", self.inner, self.inner.nvars())
    }

    fn __add__(&self, o: &WeylElement) -> PyResult<WeylElement> {
        same_ring(self, o)?;
        Ok(WeylElement { inner: &self.inner + &o.inner })
    }

    fn __sub__(&self, o: &WeylElement) -> PyResult<WeylElement> {
        same_ring(self, o)?;
        Ok(WeylElement { inner: &self.inner - &o.inner })
    }

    fn __mul__(&self, o: &WeylElement) -> PyResult<WeylElement> {
        same_ring(self, o)?;
        Ok(WeylElement { inner: &self.inner * &o.inner })
    }
}

fn same_ring(a: &WeylElement, b: &WeylElement) -> PyResult<()> {
    if a.inner.nvars() != b.inner.nvars() {
        return Err(DregError::new_err("elements of Weyl algebras in different numbers of variables"));
    }
    Ok(())
}

/// A connection `∂v = v' + A v` on an open of the line.
#[pyclass(module = "dreg", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct System {
    inner: ConnectionSystem,
}

#[pymethods]
impl System {
    /// Parses the `.sys` format: `rank m`, then `m` rows of `;`-separated entries.
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(System {
            inner: parse_system(text).py_err()?,
        })
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    fn matrix(&self) -> Vec<Vec<String>> {
        self.inner.matrix().iter().map(|r| r.iter().map(|e| e.to_string()).collect()).collect()
    }

    fn report<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &regular_system_report(&self.inner).py_err()?)
    }

    #[pyo3(signature = (point = "0", max_steps = None))]
    fn saturate<'py>(&self, py: Python<'py>, point: &str, max_steps: Option<usize>) -> PyResult<Bound<'py, PyAny>> {
        let sat = saturate_lattice(&self.inner, &parse_point(point).py_err()?, max_steps);
        to_py(py, &sat)
    }
}

/// Characteristic variety of `A_n / (generators)`, generators `;`-separated.
#[pyfunction]
#[pyo3(signature = (generators, n = None, max_pairs = 100_000))]
fn characteristic<'py>(
    py: Python<'py>,
    generators: &str,
    n: Option<usize>,
    max_pairs: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let n = match n {
        Some(n) => n,
        None => infer_nvars(generators).py_err()?,
    };
    let gens = parse_weyl(generators, n).py_err()?;
    let budget = Budget::with_pairs(max_pairs);
    let ideal = characteristic_ideal(&gens, &budget).py_err()?;
    to_py(py, &characteristic_variety(ideal, &budget).py_err()?)
}

/// Annihilator of the graded pole filtration on the chart `x_1 ⋯ x_r = 0` in
/// `n` variables, up to symbol degree `bound`.
#[pyfunction]
#[pyo3(signature = (n, r, bound = 6))]
fn pole_annihilator<'py>(py: Python<'py>, n: usize, r: usize, bound: usize) -> PyResult<Bound<'py, PyAny>> {
    let chart = NCChart::new(n, r).py_err()?;
    to_py(py, &pole_filtration_annihilator(&chart, bound, &Budget::default()).py_err()?)
}

/// Forward certificate for a logarithmic lattice in the `.chart` format.
#[pyfunction]
#[pyo3(signature = (chart, bound = 4))]
fn forward_filtration<'py>(py: Python<'py>, chart: &str, bound: usize) -> PyResult<Bound<'py, PyAny>> {
    let lattice = parse_chart(chart).py_err()?;
    to_py(py, &theorem_forward_filtration(&lattice, bound).py_err()?)
}

#[pyfunction]
#[pyo3(signature = (chart, bound = 4))]
fn annihilator_inclusion<'py>(py: Python<'py>, chart: &str, bound: usize) -> PyResult<Bound<'py, PyAny>> {
    let lattice = parse_chart(chart).py_err()?;
    to_py(py, &prop21_inclusion(&lattice, bound).py_err()?)
}

/// `(name, operator source)` for every corpus entry.
#[pyfunction]
fn corpus() -> Vec<(&'static str, &'static str)> {
    CORPUS.iter().map(|e| (e.name, e.source)).collect()
}

#[pymodule]
fn dreg(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("DregError", py.get_type::<DregError>())?;
    m.add("BudgetExceeded", py.get_type::<BudgetExceeded>())?;
    m.add("Contradiction", py.get_type::<Contradiction>())?;
    m.add_class::<Operator>()?;
    m.add_class::<WeylElement>()?;
    m.add_class::<System>()?;
    m.add_function(wrap_pyfunction!(characteristic, m)?)?;
    m.add_function(wrap_pyfunction!(pole_annihilator, m)?)?;
    m.add_function(wrap_pyfunction!(forward_filtration, m)?)?;
    m.add_function(wrap_pyfunction!(annihilator_inclusion, m)?)?;
    m.add_function(wrap_pyfunction!(corpus, m)?)?;
    Ok(())
}
