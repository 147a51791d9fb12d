//! Python bindings. Measures, specs and configs are passed as JSON-compatible dicts (or JSON strings)
//! with the same shape as the command-line configs; reports come back as dicts.

use ::freesub::cli::{execute_json, Command, CliError};
use ::freesub::freeprob::{AlgebraSpec, AlgebraSpecJson};
use ::freesub::hilbreg;
use ::freesub::subord::{self, SolverConfig, SubordError, SubordResult};
use ::freesub::transforms::{self, MeasureR, MeasureRJson, MeasureT, MeasureTJson};
use num::complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyString};
use serde::de::DeserializeOwned;

pyo3::create_exception!(freesub, NonConvergenceError, PyRuntimeError);
pyo3::create_exception!(freesub, DegenerateError, PyValueError);

fn value_err(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn subord_err(e: SubordError) -> PyErr {
    match e {
        SubordError::NonConvergence { .. } | SubordError::MatrixNonConvergence { .. } => NonConvergenceError::new_err(e.to_string()),
        SubordError::Degenerate { .. } => DegenerateError::new_err(e.to_string()),
        other => value_err(other),
    }
}

/// JSON text of a dict, list or string argument.
fn json_text(obj: &Bound<'_, PyAny>) -> PyResult<String> {
    if let Ok(s) = obj.cast::<PyString>() {
        return Ok(s.to_string());
    }
    obj.py().import("json")?.call_method1("dumps", (obj,))?.extract()
}

fn parse<T: DeserializeOwned>(obj: &Bound<'_, PyAny>) -> PyResult<T> {
    serde_json::from_str(&json_text(obj)?).map_err(value_err)
}

fn from_json<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (text,))
}

fn measure_r(obj: &Bound<'_, PyAny>) -> PyResult<MeasureR> {
    MeasureR::try_from(&parse::<MeasureRJson>(obj)?).map_err(value_err)
}

fn measure_t(obj: &Bound<'_, PyAny>) -> PyResult<MeasureT> {
    MeasureT::try_from(&parse::<MeasureTJson>(obj)?).map_err(value_err)
}

fn spec(obj: &Bound<'_, PyAny>) -> PyResult<AlgebraSpec> {
    AlgebraSpec::try_from(&parse::<AlgebraSpecJson>(obj)?).map_err(value_err)
}

fn solver(tol: f64, max_iter: usize, damping: f64) -> PyResult<SolverConfig> {
    let cfg = SolverConfig { tol, max_iter, damping };
    cfg.validate().map_err(value_err)?;
    Ok(cfg)
}

fn result_dict<'py>(py: Python<'py>, r: &SubordResult) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("point", r.point)?;
    d.set_item("omega1", r.omega1)?;
    d.set_item("omega2", r.omega2)?;
    d.set_item("value", r.value)?;
    d.set_item("residual", r.residual)?;
    d.set_item("iterations", r.iterations)?;
    Ok(d)
}

/// Cauchy transform `G_μ(z)` for `Im z > 0`.
#[pyfunction]
fn cauchy_transform(measure: &Bound<'_, PyAny>, z: Complex64) -> PyResult<Complex64> {
    transforms::cauchy_G(&measure_r(measure)?, z).map_err(value_err)
}

/// `ψ_μ(z) = ∫ zt/(1 − zt) dμ(t)` for `|z| < 1`.
#[pyfunction]
fn psi_transform(measure: &Bound<'_, PyAny>, z: Complex64) -> PyResult<Complex64> {
    Ok(transforms::psi_scalar(&measure_t(measure)?, z).map_err(value_err)?.value)
}

/// Density of `μ` at each `x`, recovered from `G_μ(x + iη)` at height `eta`.
#[pyfunction]
fn stieltjes_density(measure: &Bound<'_, PyAny>, x: Vec<f64>, eta: f64) -> PyResult<Vec<f64>> {
    if !(eta > 0.0) {
        return Err(value_err("eta must be positive"));
    }
    let mu = measure_r(measure)?;
    let g = x.iter().map(|&t| transforms::cauchy_G(&mu, Complex64::new(t, eta))).collect::<Result<Vec<_>, _>>().map_err(value_err)?;
    Ok(transforms::stieltjes_invert(&x, &g, eta).density)
}

/// Subordination functions of `μ ⊞ ν` at `z`; `value` is `G_{μ⊞ν}(z)`.
#[pyfunction]
#[pyo3(signature = (mu, nu, z, tol = 1e-12, max_iter = 10_000, damping = 1.0))]
fn additive_subordination<'py>(
    py: Python<'py>,
    mu: &Bound<'py, PyAny>,
    nu: &Bound<'py, PyAny>,
    z: Complex64,
    tol: f64,
    max_iter: usize,
    damping: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let (mu, nu, cfg) = (measure_r(mu)?, measure_r(nu)?, solver(tol, max_iter, damping)?);
    let r = py.detach(|| subord::additive_subord(&mu, &nu, z, &cfg)).map_err(subord_err)?;
    result_dict(py, &r)
}

/// Subordination functions of the free unitary product `UV` at `|z| < 1`; `value` is `ψ_{UV}(z)`.
#[pyfunction]
#[pyo3(signature = (u, v, z, tol = 1e-12, max_iter = 10_000, damping = 1.0))]
fn multiplicative_subordination<'py>(
    py: Python<'py>,
    u: &Bound<'py, PyAny>,
    v: &Bound<'py, PyAny>,
    z: Complex64,
    tol: f64,
    max_iter: usize,
    damping: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let (u, v, cfg) = (measure_t(u)?, measure_t(v)?, solver(tol, max_iter, damping)?);
    let r = py.detach(|| subord::mult_unitary_subord(&u, &v, z, &cfg)).map_err(subord_err)?;
    result_dict(py, &r)
}

/// Exact Taylor coefficients `a_1, …, a_order` of `ω₁` as `(re, im)` rational strings.
#[pyfunction]
fn multiplicative_series(u: &Bound<'_, PyAny>, v: &Bound<'_, PyAny>, order: usize) -> PyResult<Vec<[String; 2]>> {
    let coeffs = subord::mult_series_subord(&spec(u)?, &spec(v)?, order).map_err(subord_err)?;
    Ok(coeffs.into_iter().map(Into::into).collect())
}

/// Regularized circular Hilbert transform of the arc density at `theta1`, with the spread of the
/// δ-ladder estimates.
#[pyfunction]
fn circular_hilbert(epsilon: f64, theta1: f64) -> PyResult<(f64, f64)> {
    let r = hilbreg::circular_hilbert(theta1, &hilbreg::ArcDensityParams::new(epsilon)).map_err(value_err)?;
    Ok((r.value, r.spread))
}

/// Runs a command-line command (`"convolve-add"`, `"verify-algebra"`, …) on a config and returns
/// `(report, exit_code)`.
#[pyfunction]
#[pyo3(signature = (command, config, seed = None, tol = None))]
fn run<'py>(
    py: Python<'py>,
    command: &str,
    config: &Bound<'py, PyAny>,
    seed: Option<u64>,
    tol: Option<f64>,
) -> PyResult<(Bound<'py, PyAny>, i32)> {
    let cmd = Command::from_name(command).ok_or_else(|| value_err(format!("unknown command {command:?}")))?;
    let text = json_text(config)?;
    match py.detach(|| execute_json(cmd, &text, seed, tol)) {
        Ok(outcome) => Ok((from_json(py, &outcome.report.to_json())?, outcome.exit_code())),
        Err(CliError::Config(m)) => Err(value_err(m)),
        Err(e) => Err(PyRuntimeError::new_err(e.to_string())),
    }
}

#[pymodule]
fn freesub(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(cauchy_transform, m)?)?;
    m.add_function(wrap_pyfunction!(psi_transform, m)?)?;
    m.add_function(wrap_pyfunction!(stieltjes_density, m)?)?;
    m.add_function(wrap_pyfunction!(additive_subordination, m)?)?;
    m.add_function(wrap_pyfunction!(multiplicative_subordination, m)?)?;
    m.add_function(wrap_pyfunction!(multiplicative_series, m)?)?;
    m.add_function(wrap_pyfunction!(circular_hilbert, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add("NonConvergenceError", m.py().get_type::<NonConvergenceError>())?;
    m.add("DegenerateError", m.py().get_type::<DegenerateError>())?;
    Ok(())
}
