//! Python bindings. Rationals cross the boundary as exact strings
//! ("p/q", integers, or terminating decimals); nothing is ever rounded.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use esmcert_core::rational::{format_rational, parse_rational, Rational};
use esmcert_core::report;
use esmcert_core::scenario::ScenarioFile;
use esmcert_core::{casebook, construct, criteria, space};

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse(s: &str) -> PyResult<Rational> {
    parse_rational(s).map_err(err)
}

fn parse_all(values: Vec<String>) -> PyResult<Vec<Rational>> {
    values.iter().map(|s| parse(s)).collect()
}

fn format_all(values: &[Rational]) -> Vec<String> {
    values.iter().map(format_rational).collect()
}

/// A finite probability space with strictly positive atom weights.
#[pyclass(frozen)]
struct Space {
    inner: std::sync::Arc<space::FiniteProbSpace>,
}

#[pymethods]
impl Space {
    #[new]
    fn new(labels: Vec<String>, weights: Vec<String>) -> PyResult<Self> {
        let inner = space::FiniteProbSpace::new(labels, parse_all(weights)?).map_err(err)?;
        Ok(Space { inner })
    }

    fn labels(&self) -> Vec<String> {
        self.inner.labels().to_vec()
    }

    fn weights(&self) -> Vec<String> {
        format_all(self.inner.weights())
    }

    fn atom_count(&self) -> usize {
        self.inner.atom_count()
    }

    fn reference_measure(&self) -> Measure {
        Measure {
            inner: self.inner.reference_measure(),
        }
    }

    fn __repr__(&self) -> String {
        format!("Space({} atoms)", self.inner.atom_count())
    }
}

/// An exact-rational payoff on a `Space`.
#[pyclass(frozen)]
struct RandomVariable {
    inner: space::RandomVariable,
}

#[pymethods]
impl RandomVariable {
    #[new]
    fn new(space: &Space, values: Vec<String>) -> PyResult<Self> {
        let inner = space::RandomVariable::new(&space.inner, parse_all(values)?).map_err(err)?;
        Ok(RandomVariable { inner })
    }

    fn values(&self) -> Vec<String> {
        format_all(self.inner.values())
    }

    fn ess_sup(&self) -> String {
        format_rational(&space::ess_sup(&self.inner))
    }

    fn __repr__(&self) -> String {
        format!("RandomVariable([{}])", self.values().join(", "))
    }
}

/// A probability measure on a `Space` (nonnegative, total mass 1).
#[pyclass(frozen)]
struct Measure {
    inner: space::Measure,
}

#[pymethods]
impl Measure {
    #[new]
    fn new(space: &Space, weights: Vec<String>) -> PyResult<Self> {
        let inner = space::Measure::new(&space.inner, parse_all(weights)?).map_err(err)?;
        Ok(Measure { inner })
    }

    fn weights(&self) -> Vec<String> {
        format_all(self.inner.weights())
    }

    fn support(&self) -> Vec<usize> {
        self.inner.support()
    }

    fn __repr__(&self) -> String {
        format!("Measure([{}])", self.weights().join(", "))
    }
}

/// A convex cone ("cone") or linear space ("linear") of payoffs.
#[pyclass(frozen)]
struct Cone {
    inner: space::ConeSpec,
}

#[pymethods]
impl Cone {
    #[new]
    fn new(space: &Space, generators: Vec<PyRef<RandomVariable>>, kind: &str) -> PyResult<Self> {
        let kind = match kind {
            "cone" => space::ConeKind::ConvexCone,
            "linear" => space::ConeKind::LinearSpace,
            other => {
                return Err(PyValueError::new_err(format!(
                    "kind `{other}` is neither \"cone\" nor \"linear\""
                )))
            }
        };
        let generators = generators.iter().map(|g| g.inner.clone()).collect();
        let inner = space::ConeSpec::new(&space.inner, generators, kind).map_err(err)?;
        Ok(Cone { inner })
    }

    fn kind(&self) -> String {
        self.inner.kind().to_string()
    }

    fn __repr__(&self) -> String {
        format!(
            "Cone({} generators, {})",
            self.inner.generators().len(),
            self.inner.kind()
        )
    }
}

/// E_P(X), exact.
#[pyfunction]
fn expectation(p: &Measure, x: &RandomVariable) -> PyResult<String> {
    Ok(format_rational(
        &space::expectation(&p.inner, &x.inner).map_err(err)?,
    ))
}

/// (holds, witness values or None): no payoff in the cone is a nonzero
/// nonnegative variable.
#[pyfunction]
fn check_na(cone: &Cone) -> PyResult<(bool, Option<Vec<String>>)> {
    let report = criteria::check_na(&cone.inner).map_err(err)?;
    Ok((
        report.holds,
        report.witness.map(|x| format_all(x.values())),
    ))
}

fn extended_to_py(value: criteria::Extended) -> Option<String> {
    value.finite().map(format_rational)
}

/// Minimal k with E_Q(X) ≤ k·E_Q(X⁻) for all X; None means +∞.
#[pyfunction]
fn min_k_bstar(cone: &Cone, q: &Measure) -> PyResult<Option<String>> {
    Ok(extended_to_py(
        criteria::min_k_b_star(&cone.inner, &q.inner).map_err(err)?.value,
    ))
}

/// Minimal k with E_Q(X) ≤ k·ess sup(−X) for all X; None means +∞.
#[pyfunction]
fn min_k_b(cone: &Cone, q: &Measure) -> PyResult<Option<String>> {
    Ok(extended_to_py(
        criteria::min_k_b(&cone.inner, &q.inner).map_err(err)?.value,
    ))
}

/// Minimal c with |E_Q(X)| ≤ c·E_Q|X| on a linear space; None means +∞.
#[pyfunction]
fn c_min_bstarstar(cone: &Cone, q: &Measure) -> PyResult<Option<String>> {
    Ok(extended_to_py(
        criteria::c_min_b_star_star(&cone.inner, &q.inner).map_err(err)?,
    ))
}

#[pyfunction]
fn convert_k_to_c(k: &str) -> PyResult<String> {
    Ok(format_rational(
        &criteria::convert_k_to_c(&parse(k)?).map_err(err)?,
    ))
}

#[pyfunction]
fn convert_c_to_k(c: &str) -> PyResult<String> {
    Ok(format_rational(
        &criteria::convert_c_to_k(&parse(c)?).map_err(err)?,
    ))
}

/// (measure, floor) when an equivalent super-martingale measure exists,
/// (None, None) otherwise.
#[pyfunction]
fn find_esm(cone: &Cone) -> PyResult<(Option<Measure>, Option<String>)> {
    match construct::find_esm(&cone.inner).map_err(err)? {
        construct::EsmResult::Found { measure, floor } => Ok((
            Some(Measure { inner: measure }),
            Some(format_rational(&floor)),
        )),
        construct::EsmResult::NoEquivalent { .. } => Ok((None, None)),
    }
}

/// A measure with the super-martingale inequalities inside
/// (1/(k+1))·Q ≤ P ≤ (k+1)·Q, or None.
#[pyfunction]
fn find_esm_in_band(cone: &Cone, q: &Measure, k: &str) -> PyResult<Option<Measure>> {
    match construct::find_esm_in_band(&cone.inner, &q.inner, &parse(k)?).map_err(err)? {
        construct::Feasibility::Found(p) => Ok(Some(Measure { inner: p })),
        construct::Feasibility::Infeasible(_) => Ok(None),
    }
}

/// The single-payoff density construction P = f·Q with t = k+1.
#[pyfunction]
fn single_x_density(q: &Measure, x: &RandomVariable, k: &str) -> PyResult<Measure> {
    Ok(Measure {
        inner: construct::single_x_density(&q.inner, &x.inner, &parse(k)?).map_err(err)?,
    })
}

/// Full criterion report for a scenario JSON string: (text, affirmative).
#[pyfunction]
fn check_report(scenario_json: &str) -> PyResult<(String, bool)> {
    let scenario = ScenarioFile::from_str(scenario_json)
        .and_then(|f| f.build())
        .map_err(err)?;
    report::check_text(&scenario.cone).map_err(err)
}

/// Measure-or-certificate report for a scenario JSON string.
#[pyfunction]
fn esm_report(scenario_json: &str) -> PyResult<(String, bool)> {
    let scenario = ScenarioFile::from_str(scenario_json)
        .and_then(|f| f.build())
        .map_err(err)?;
    report::esm_text(&scenario.cone).map_err(err)
}

/// Coupling report for a scenario JSON string with a product block.
#[pyfunction]
fn couple_report(scenario_json: &str) -> PyResult<(String, bool)> {
    let scenario = ScenarioFile::from_str(scenario_json)
        .and_then(|f| f.build())
        .map_err(err)?;
    let (ps, pair) = scenario
        .coupling
        .as_ref()
        .ok_or_else(|| PyValueError::new_err("scenario has no product block"))?;
    report::couple_text(ps, pair).map_err(err)
}

/// Run a bundled case study by name with its default parameters.
#[pyfunction]
fn run_case(name: &str) -> PyResult<(String, bool)> {
    let report = match name {
        "finite-dim" => casebook::case_finite_dim_ftap(1, 4, 2),
        "sign-sequences" => casebook::case_sign_sequences(3, None),
        "approx-esfa" => casebook::case_approx_esfa(&parse("1/10")?, 8, 4),
        "vanishing-risk" => casebook::case_nflvr_gap(6, 2),
        "bounded-density" => casebook::case_bounded_density(1, 3),
        other => {
            return Err(PyValueError::new_err(format!("unknown case `{other}`")))
        }
    }
    .map_err(err)?;
    Ok(report::case_text(&report))
}

#[pymodule]
fn esmcert(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Space>()?;
    m.add_class::<RandomVariable>()?;
    m.add_class::<Measure>()?;
    m.add_class::<Cone>()?;
    m.add_function(wrap_pyfunction!(expectation, m)?)?;
    m.add_function(wrap_pyfunction!(check_na, m)?)?;
    m.add_function(wrap_pyfunction!(min_k_bstar, m)?)?;
    m.add_function(wrap_pyfunction!(min_k_b, m)?)?;
    m.add_function(wrap_pyfunction!(c_min_bstarstar, m)?)?;
    m.add_function(wrap_pyfunction!(convert_k_to_c, m)?)?;
    m.add_function(wrap_pyfunction!(convert_c_to_k, m)?)?;
    m.add_function(wrap_pyfunction!(find_esm, m)?)?;
    m.add_function(wrap_pyfunction!(find_esm_in_band, m)?)?;
    m.add_function(wrap_pyfunction!(single_x_density, m)?)?;
    m.add_function(wrap_pyfunction!(check_report, m)?)?;
    m.add_function(wrap_pyfunction!(esm_report, m)?)?;
    m.add_function(wrap_pyfunction!(couple_report, m)?)?;
    m.add_function(wrap_pyfunction!(run_case, m)?)?;
    Ok(())
}
