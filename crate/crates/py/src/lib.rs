//! Python bindings for `floerhp_core`.

use std::collections::BTreeSet;

use floerhp_core::casson::{parse_database, two_bridge_lambda};
use floerhp_core::floer::{census_of, default_protected_window, hp_closed, limit_data};
use floerhp_core::polys::SummandSpec;
use floerhp_core::roots::Sign;
use floerhp_core::{self as core, Chirality, Coeff, Family, KnotRecord, RootCountSpec, Slope};
use num_rational::Ratio;
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(floerhp, FloerError, PyValueError);

fn err(e: core::Error) -> PyErr {
    FloerError::new_err(format!("{}: {e}", e.kind()))
}

fn slope(s: &str) -> PyResult<Slope> {
    s.parse::<Slope>().map_err(err)
}

fn family(s: &str) -> PyResult<Family> {
    s.parse::<Family>().map_err(PyValueError::new_err)
}

fn knot(name: &str, db: Option<&str>) -> PyResult<KnotRecord> {
    let mut records = KnotRecord::builtins();
    if let Some(text) = db {
        records.extend(parse_database(text).map_err(err)?);
    }
    records
        .into_iter()
        .rev()
        .find(|k| k.name == name)
        .ok_or_else(|| PyValueError::new_err(format!("unknown knot {name:?}")))
}

fn summand(name: &str) -> PyResult<SummandSpec> {
    match name {
        "trefoil-r" => Ok(SummandSpec::trefoil_right()),
        "trefoil-l" => Ok(SummandSpec::trefoil_left()),
        _ => Err(PyValueError::new_err(format!("unknown summand {name:?}"))),
    }
}

fn fraction<'py>(py: Python<'py>, r: Ratio<i64>) -> PyResult<Bound<'py, PyAny>> {
    PyModule::import(py, "fractions")?.getattr("Fraction")?.call1((*r.numer(), *r.denom()))
}

fn json_loads<'py>(py: Python<'py>, s: &str) -> PyResult<Bound<'py, PyAny>> {
    PyModule::import(py, "json")?.call_method1("loads", (s,))
}

/// Graded abelian group with rank and torsion in each degree.
#[pyclass(name = "GradedGroup", module = "floerhp", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PyGradedGroup {
    inner: core::GradedGroup,
}

impl From<core::GradedGroup> for PyGradedGroup {
    fn from(inner: core::GradedGroup) -> Self {
        PyGradedGroup { inner }
    }
}

#[pymethods]
impl PyGradedGroup {
    /// `ranks` maps degree to rank; `coeff` is "Z" or "F2".
    #[new]
    #[pyo3(signature = (ranks, coeff = "F2"))]
    fn new(ranks: Vec<(i64, u64)>, coeff: &str) -> PyResult<Self> {
        let c = match coeff {
            "Z" => Coeff::Integers,
            "F2" => Coeff::F2,
            _ => return Err(PyValueError::new_err(format!("unknown coefficients {coeff:?}"))),
        };
        Ok(core::GradedGroup::from_ranks(c, &ranks).into())
    }

    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        core::GradedGroup::from_json(s).map(Into::into).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    #[getter]
    fn coeff(&self) -> String {
        self.inner.coeff().to_string()
    }

    fn rank_at(&self, degree: i64) -> u64 {
        self.inner.rank_at(degree)
    }

    fn torsion_at(&self, degree: i64) -> Vec<u64> {
        self.inner.entry(degree).map(|e| e.torsion().to_vec()).unwrap_or_default()
    }

    /// Degree to rank, over the support.
    fn ranks(&self) -> Vec<(i64, u64)> {
        self.inner.entries().iter().map(|(d, e)| (*d, e.rank)).collect()
    }

    fn euler_characteristic(&self) -> i64 {
        self.inner.euler_characteristic()
    }

    fn total_rank(&self) -> u64 {
        self.inner.total_rank()
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    fn shift(&self, k: i64) -> Self {
        self.inner.shift(k).into()
    }

    fn direct_sum(&self, other: &PyGradedGroup) -> PyResult<Self> {
        self.inner.direct_sum(&other.inner).map(Into::into).map_err(err)
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn __repr__(&self) -> String {
        format!("GradedGroup({})", self.inner.to_json())
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }
}

#[pyfunction]
#[pyo3(signature = (knot_name, slope_str, db = None))]
fn casson_invariant(knot_name: &str, slope_str: &str, db: Option<&str>) -> PyResult<u64> {
    core::casson_invariant(&knot(knot_name, db)?, slope(slope_str)?).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (knot_name, slope_str, db = None))]
fn two_bridge_casson(knot_name: &str, slope_str: &str, db: Option<&str>) -> PyResult<u64> {
    two_bridge_lambda(&knot(knot_name, db)?, slope(slope_str)?).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (knot_name, slope_str, db = None))]
fn hp_small_knot(knot_name: &str, slope_str: &str, db: Option<&str>) -> PyResult<PyGradedGroup> {
    core::hp_small_knot(&knot(knot_name, db)?, slope(slope_str)?).map(Into::into).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (knot_name, slope_str, db = None))]
fn hp_two_bridge(knot_name: &str, slope_str: &str, db: Option<&str>) -> PyResult<PyGradedGroup> {
    core::hp_two_bridge(&knot(knot_name, db)?, slope(slope_str)?).map(Into::into).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (knot_name, slope_str, db = None))]
fn hp_sharp(knot_name: &str, slope_str: &str, db: Option<&str>) -> PyResult<PyGradedGroup> {
    core::hp_sharp(&knot(knot_name, db)?, slope(slope_str)?).map(Into::into).map_err(err)
}

#[pyfunction]
fn hp_granny(slope_str: &str) -> PyResult<PyGradedGroup> {
    core::hp_granny(slope(slope_str)?).map(Into::into).map_err(err)
}

#[pyfunction]
fn hp_square(slope_str: &str) -> PyResult<PyGradedGroup> {
    core::hp_square(slope(slope_str)?).map(Into::into).map_err(err)
}

/// Closed-form HP, without going through the component census.
#[pyfunction]
fn hp_closed_form(family_name: &str, slope_str: &str) -> PyResult<PyGradedGroup> {
    hp_closed(family(family_name)?, slope(slope_str)?).map(Into::into).map_err(err)
}

/// Component counts keyed by component type.
#[pyfunction]
fn census<'py>(py: Python<'py>, family_name: &str, slope_str: &str) -> PyResult<Bound<'py, PyDict>> {
    let c = census_of(family(family_name)?, slope(slope_str)?).map_err(err)?;
    let d = PyDict::new(py);
    for t in core::ComponentType::ALL {
        d.set_item(t.to_string(), c.count(t))?;
    }
    Ok(d)
}

/// Assembled-minus-closed comparison as a dict.
#[pyfunction]
fn consistency<'py>(py: Python<'py>, family_name: &str, slope_str: &str) -> PyResult<Bound<'py, PyAny>> {
    let r = core::hp_consistency(family(family_name)?, slope(slope_str)?).map_err(err)?;
    json_loads(py, &r.to_json())
}

/// Factors of the A-polynomial of a connected sum of trefoils, as strings.
#[pyfunction]
#[pyo3(signature = (summands, include_reducible = true))]
fn compose_connected_sum(summands: Vec<String>, include_reducible: bool) -> PyResult<Vec<String>> {
    let specs = summands.iter().map(|s| summand(s)).collect::<PyResult<Vec<_>>>()?;
    let a = core::compose_connected_sum(&specs).map_err(err)?;
    let factors = if include_reducible { a.factors() } else { a.irreducible().to_vec() };
    Ok(factors.iter().map(|f| f.to_string()).collect())
}

/// Newton-polygon slopes of the A-polynomial of a connected sum.
#[pyfunction]
fn newton_slopes<'py>(py: Python<'py>, summands: Vec<String>) -> PyResult<Vec<Bound<'py, PyAny>>> {
    let specs = summands.iter().map(|s| summand(s)).collect::<PyResult<Vec<_>>>()?;
    let a = core::compose_connected_sum(&specs).map_err(err)?;
    a.newton_slopes().into_iter().map(|r| fraction(py, r)).collect()
}

#[pyfunction]
#[pyo3(signature = (p, q, chirality = "R", exclude_nar = false))]
fn trefoil_surgery_count(p: i64, q: i64, chirality: &str, exclude_nar: bool) -> PyResult<u64> {
    let c = match chirality {
        "R" | "r" => Chirality::R,
        "L" | "l" => Chirality::L,
        _ => return Err(PyValueError::new_err(format!("unknown chirality {chirality:?}"))),
    };
    core::trefoil_surgery_count(p, q, c, exclude_nar).map_err(err)
}

/// Conjugacy classes {M, M^-1} with M^exponent = rhs, minus excluded orders.
#[pyfunction]
#[pyo3(signature = (exponent, rhs, excluded_orders = Vec::new()))]
fn count_conjugacy_classes(exponent: u64, rhs: i64, excluded_orders: Vec<u64>) -> PyResult<u64> {
    let sign = match rhs {
        1 => Sign::Plus,
        -1 => Sign::Minus,
        _ => return Err(PyValueError::new_err("rhs must be 1 or -1")),
    };
    core::count_conjugacy_classes(&RootCountSpec::new(exponent, sign, excluded_orders)).map_err(err)
}

#[pyfunction]
fn limit_rank<'py>(py: Python<'py>, family_name: &str, degree: i64, p: i64) -> PyResult<Bound<'py, PyAny>> {
    let r = core::limit_rank(family(family_name)?, degree, p).map_err(err)?;
    fraction(py, r)
}

/// `(limit, bound)` with |rank - limit*q| <= bound for q > |p|.
#[pyfunction]
fn limit_bound<'py>(
    py: Python<'py>,
    family_name: &str,
    degree: i64,
    p: i64,
) -> PyResult<(Bound<'py, PyAny>, Bound<'py, PyAny>)> {
    let (l, b) = limit_data(family(family_name)?, degree, p).map_err(err)?;
    Ok((fraction(py, l)?, fraction(py, b)?))
}

/// `(compatible, obstruction_degrees)`.
#[pyfunction]
#[pyo3(signature = (low, high, protected = None))]
fn triangle_check(
    low: &PyGradedGroup,
    high: &PyGradedGroup,
    protected: Option<Vec<i64>>,
) -> PyResult<(bool, Vec<i64>)> {
    let window: BTreeSet<i64> = protected.map(|v| v.into_iter().collect()).unwrap_or_else(default_protected_window);
    let v = core::triangle_check(&low.inner, &high.inner, &window).map_err(err)?;
    Ok((v.compatible, v.obstruction_degrees.into_iter().collect()))
}

#[pymodule]
fn floerhp(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("FloerError", m.py().get_type::<FloerError>())?;
    m.add_class::<PyGradedGroup>()?;
    m.add_function(wrap_pyfunction!(casson_invariant, m)?)?;
    m.add_function(wrap_pyfunction!(two_bridge_casson, m)?)?;
    m.add_function(wrap_pyfunction!(hp_small_knot, m)?)?;
    m.add_function(wrap_pyfunction!(hp_two_bridge, m)?)?;
    m.add_function(wrap_pyfunction!(hp_sharp, m)?)?;
    m.add_function(wrap_pyfunction!(hp_granny, m)?)?;
    m.add_function(wrap_pyfunction!(hp_square, m)?)?;
    m.add_function(wrap_pyfunction!(hp_closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(census, m)?)?;
    m.add_function(wrap_pyfunction!(consistency, m)?)?;
    m.add_function(wrap_pyfunction!(compose_connected_sum, m)?)?;
    m.add_function(wrap_pyfunction!(newton_slopes, m)?)?;
    m.add_function(wrap_pyfunction!(trefoil_surgery_count, m)?)?;
    m.add_function(wrap_pyfunction!(count_conjugacy_classes, m)?)?;
    m.add_function(wrap_pyfunction!(limit_rank, m)?)?;
    m.add_function(wrap_pyfunction!(limit_bound, m)?)?;
    m.add_function(wrap_pyfunction!(triangle_check, m)?)?;
    Ok(())
}
