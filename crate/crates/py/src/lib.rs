//! Python bindings. Specs and reports cross the boundary as plain dicts,
//! using the same field names as the JSON the CLI writes.

use diamlimit::experiments::{self, BoundsConfig, ConvergenceConfig, Ecdf};
use diamlimit::geometry::{self, BodySpec};
use diamlimit::limitlaw::{LimitModel, PolePair};
use diamlimit::{DistanceSpec, DistributionSpec, Points, SampleMode};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::de::DeserializeOwned;
use serde::Serialize;

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<T: Serialize>(py: Python<'_>, v: &T) -> PyResult<PyObject> {
    let s = serde_json::to_string(v).map_err(err)?;
    Ok(py.import("json")?.call_method1("loads", (s,))?.unbind())
}

fn from_py<T: DeserializeOwned>(obj: &Bound<'_, PyAny>) -> PyResult<T> {
    let s: String = obj.py().import("json")?.call_method1("dumps", (obj,))?.extract()?;
    serde_json::from_str(&s).map_err(err)
}

fn points(rows: Vec<Vec<f64>>) -> PyResult<Points> {
    if rows.windows(2).any(|w| w[0].len() != w[1].len()) {
        return Err(err("points must all have the same dimension"));
    }
    Ok(Points::from_rows(&rows))
}

fn mode(s: &str) -> PyResult<SampleMode> {
    match s {
        "fixed" => Ok(SampleMode::Fixed),
        "poissonized" => Ok(SampleMode::Poissonized),
        _ => Err(err(format!("mode '{s}': expected fixed or poissonized"))),
    }
}

/// Condition report for a body dict, e.g. `{"kind": "ellipsoid", "half_axes": [1, 0.5]}`.
#[pyfunction]
#[pyo3(signature = (body, tol = geometry::PSD_TOL))]
fn check_condition(py: Python<'_>, body: &Bound<'_, PyAny>, tol: f64) -> PyResult<PyObject> {
    let body: BodySpec = from_py(body)?;
    body.validate(true).map_err(err)?;
    let (l, r) = body.pole_caps().map_err(err)?;
    to_py(py, &geometry::check_condition3(&l, &r, tol).map_err(err)?)
}

/// Hessians of the two pole caps in tangential coordinates.
#[pyfunction]
fn hessians(body: &Bound<'_, PyAny>) -> PyResult<(Vec<Vec<f64>>, Vec<Vec<f64>>)> {
    let body: BodySpec = from_py(body)?;
    let (l, r) = body.hessians().map_err(err)?;
    Ok((geometry::matrix_to_rows(&l), geometry::matrix_to_rows(&r)))
}

#[pyfunction]
#[pyo3(signature = (body, dist, n, seed = 0, mode = "fixed"))]
fn sample(body: &Bound<'_, PyAny>, dist: &Bound<'_, PyAny>, n: u64, seed: u64, mode: &str) -> PyResult<Vec<Vec<f64>>> {
    let body: BodySpec = from_py(body)?;
    let dist: DistributionSpec = from_py(dist)?;
    let cloud = diamlimit::PointCloud::generate(&body, dist, n, self::mode(mode)?, seed).map_err(err)?;
    Ok(cloud.points.to_rows())
}

#[pyfunction]
#[pyo3(signature = (points, p = 2.0, brute = false))]
fn diameter(points: Vec<Vec<f64>>, p: f64, brute: bool) -> PyResult<f64> {
    let pts = self::points(points)?;
    let norm = DistanceSpec::new(p).map_err(err)?;
    Ok(if brute {
        diamlimit::diameter_brute(&pts, norm)
    } else {
        diamlimit::diameter_pruned(&pts, norm)
    })
}

/// The `k` largest pairwise distances, descending.
#[pyfunction]
#[pyo3(signature = (points, k, p = 2.0))]
fn k_largest(points: Vec<Vec<f64>>, k: usize, p: f64) -> PyResult<Vec<f64>> {
    let norm = DistanceSpec::new(p).map_err(err)?;
    Ok(diamlimit::k_largest(&self::points(points)?, k, norm).map_err(err)?.values)
}

/// `n^rate (2a - diam)` with the rate implied by body, distribution and norm.
#[pyfunction]
#[pyo3(signature = (diam, n, body, dist, p = 2.0))]
fn scaled_statistic(diam: f64, n: f64, body: &Bound<'_, PyAny>, dist: &Bound<'_, PyAny>, p: f64) -> PyResult<f64> {
    let body: BodySpec = from_py(body)?;
    let dist: DistributionSpec = from_py(dist)?;
    let rate = experiments::rate_for(&body, dist, DistanceSpec::new(p).map_err(err)?).map_err(err)?;
    diamlimit::scaled_statistic(diam, n, rate, body.half_diameter()).map_err(err)
}

#[pyfunction]
fn ks_distance(a: Vec<f64>, b: Vec<f64>) -> PyResult<f64> {
    let (a, b) = (Ecdf::new(a).map_err(err)?, Ecdf::new(b).map_err(err)?);
    experiments::ks_distance(&a, &b).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (body, dist, n, reps, seed = 0, mode = "poissonized", norm_p = 2.0, k = 1))]
#[allow(clippy::too_many_arguments)]
fn run_convergence(
    py: Python<'_>,
    body: &Bound<'_, PyAny>,
    dist: &Bound<'_, PyAny>,
    n: u64,
    reps: usize,
    seed: u64,
    mode: &str,
    norm_p: f64,
    k: usize,
) -> PyResult<PyObject> {
    let cfg = ConvergenceConfig::new(from_py(body)?, from_py(dist)?, n, reps, self::mode(mode)?, seed)
        .with_norm(norm_p)
        .with_k(k);
    let run = py.allow_threads(|| experiments::run_convergence(&cfg)).map_err(err)?;
    to_py(py, &run)
}

/// Draws from the limit law with intensities derived from the body.
#[pyfunction]
#[pyo3(signature = (body, reps, dist = None, b = diamlimit::limitlaw::DEFAULT_TRUNCATION, k = 1, seed = 0))]
fn run_limit(
    py: Python<'_>,
    body: &Bound<'_, PyAny>,
    reps: usize,
    dist: Option<&Bound<'_, PyAny>>,
    b: f64,
    k: usize,
    seed: u64,
) -> PyResult<PyObject> {
    let body: BodySpec = from_py(body)?;
    let dist = match dist {
        Some(d) => from_py(d)?,
        None => match &body {
            BodySpec::PSuperellipsoid { p, .. } => DistributionSpec::UniformPSuperellipsoid { p: *p },
            _ => DistributionSpec::UniformEllipsoid,
        },
    };
    let pair = PolePair::from_body(&body, Some(dist), None, b).map_err(err)?;
    let model = LimitModel::PolePairs(vec![pair]);
    let run = py.allow_threads(|| experiments::run_limit(&model, reps, k, seed)).map_err(err)?;
    to_py(py, &run)
}

#[pyfunction]
#[pyo3(signature = (d, e, beta, half_axes, n, reps, seed = 0, t_grid = None))]
#[allow(clippy::too_many_arguments)]
fn bounds(
    py: Python<'_>,
    d: usize,
    e: usize,
    beta: f64,
    half_axes: Vec<f64>,
    n: u64,
    reps: usize,
    seed: u64,
    t_grid: Option<Vec<f64>>,
) -> PyResult<PyObject> {
    let cfg = BoundsConfig {
        d,
        e,
        beta,
        half_axes,
        n,
        reps,
        t_grid,
        seed,
    };
    let report = py.allow_threads(|| experiments::run_bounds_check(&cfg)).map_err(err)?;
    to_py(py, &report)
}

#[pymodule]
fn pydiamlimit(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(check_condition, m)?)?;
    m.add_function(wrap_pyfunction!(hessians, m)?)?;
    m.add_function(wrap_pyfunction!(sample, m)?)?;
    m.add_function(wrap_pyfunction!(diameter, m)?)?;
    m.add_function(wrap_pyfunction!(k_largest, m)?)?;
    m.add_function(wrap_pyfunction!(scaled_statistic, m)?)?;
    m.add_function(wrap_pyfunction!(ks_distance, m)?)?;
    m.add_function(wrap_pyfunction!(run_convergence, m)?)?;
    m.add_function(wrap_pyfunction!(run_limit, m)?)?;
    m.add_function(wrap_pyfunction!(bounds, m)?)?;
    Ok(())
}
