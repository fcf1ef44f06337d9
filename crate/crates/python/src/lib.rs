//! Python bindings for the zonoreach core crate.

use std::path::PathBuf;

use nalgebra::{DMatrix, DVector};
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use zonoreach::estimator::{DriftStructure, EstimatorState, NoiseStructure, Regression};
use zonoreach::scenario::{self, Mode, ScenarioConfig};
use zonoreach::sets::Reduction;
use zonoreach::Error;

fn to_py(e: Error) -> PyErr {
    if e.is_numeric() {
        PyArithmeticError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn matrix(rows: &[Vec<f64>]) -> PyResult<DMatrix<f64>> {
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(PyValueError::new_err("rows have different lengths"));
    }
    Ok(DMatrix::from_fn(rows.len(), ncols, |i, j| rows[i][j]))
}

fn rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn reduction(method: &str) -> PyResult<Reduction> {
    match method {
        "norm_box" => Ok(Reduction::NormBox),
        "girard" => Ok(Reduction::Girard),
        "pca" => Ok(Reduction::Pca),
        other => Err(PyValueError::new_err(format!("unknown reduction `{other}`"))),
    }
}

fn json_loads(py: Python<'_>, text: String) -> PyResult<Py<PyAny>> {
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

/// Zonotope `{c + G β : ‖β‖_∞ ≤ 1}`.
#[pyclass(skip_from_py_object, name = "Zonotope", module = "zonoreach_py")]
#[derive(Clone)]
struct PyZonotope(zonoreach::Zonotope);

#[pymethods]
impl PyZonotope {
    /// Center and generator columns.
    #[new]
    #[pyo3(signature = (center, generators = Vec::new()))]
    fn new(center: Vec<f64>, generators: Vec<Vec<f64>>) -> PyResult<Self> {
        zonoreach::Zonotope::from_slices(&center, &generators).map(Self).map_err(to_py)
    }

    #[staticmethod]
    fn from_bounds(lo: Vec<f64>, hi: Vec<f64>) -> PyResult<Self> {
        zonoreach::Zonotope::from_bounds(&DVector::from_vec(lo), &DVector::from_vec(hi))
            .map(Self)
            .map_err(to_py)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        serde_json::from_str(text).map(Self).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.0).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn num_generators(&self) -> usize {
        self.0.num_generators()
    }

    #[getter]
    fn center(&self) -> Vec<f64> {
        self.0.center().iter().copied().collect()
    }

    /// Generator columns.
    #[getter]
    fn generators(&self) -> Vec<Vec<f64>> {
        self.0.generators().column_iter().map(|c| c.iter().copied().collect()).collect()
    }

    fn linear_map(&self, l: Vec<Vec<f64>>) -> PyResult<Self> {
        self.0.linear_map(&matrix(&l)?).map(Self).map_err(to_py)
    }

    fn minkowski_sum(&self, other: &Self) -> PyResult<Self> {
        self.0.minkowski_sum(&other.0).map(Self).map_err(to_py)
    }

    fn __add__(&self, other: &Self) -> PyResult<Self> {
        self.minkowski_sum(other)
    }

    fn cartesian_product(&self, other: &Self) -> Self {
        Self(self.0.cartesian_product(&other.0))
    }

    #[pyo3(signature = (order, method = "norm_box"))]
    fn reduce(&self, order: usize, method: &str) -> PyResult<Self> {
        self.0.reduce_with(order, reduction(method)?).map(Self).map_err(to_py)
    }

    /// `(lower, upper)` bounds of the box hull.
    fn interval_hull(&self) -> (Vec<f64>, Vec<f64>) {
        let h = self.0.interval_hull();
        (h.lower().iter().copied().collect(), h.upper().iter().copied().collect())
    }

    #[pyo3(signature = (point, tol = 1e-9))]
    fn contains(&self, point: Vec<f64>, tol: f64) -> PyResult<bool> {
        zonoreach::sets::contains_point(&self.0, &DVector::from_vec(point), tol).map_err(to_py)
    }

    /// `count` uniform factor samples from a seeded generator.
    #[pyo3(signature = (count, seed = 0))]
    fn sample(&self, count: usize, seed: u64) -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count).map(|_| self.0.sample(&mut rng).iter().copied().collect()).collect()
    }

    fn __repr__(&self) -> String {
        format!("Zonotope(dim={}, generators={})", self.0.dim(), self.0.num_generators())
    }
}

/// Matrix zonotope `{C + Σ βᵢ Gᵢ : ‖β‖_∞ ≤ 1}`.
#[pyclass(skip_from_py_object, name = "MatrixZonotope", module = "zonoreach_py")]
#[derive(Clone)]
struct PyMatrixZonotope(zonoreach::MatrixZonotope);

#[pymethods]
impl PyMatrixZonotope {
    #[new]
    #[pyo3(signature = (center, generators = Vec::new()))]
    fn new(center: Vec<Vec<f64>>, generators: Vec<Vec<Vec<f64>>>) -> PyResult<Self> {
        let gens = generators.iter().map(|g| matrix(g)).collect::<PyResult<Vec<_>>>()?;
        zonoreach::MatrixZonotope::new(matrix(&center)?, gens).map(Self).map_err(to_py)
    }

    #[getter]
    fn shape(&self) -> (usize, usize) {
        self.0.shape()
    }

    #[getter]
    fn center(&self) -> Vec<Vec<f64>> {
        rows(self.0.center())
    }

    #[getter]
    fn generators(&self) -> Vec<Vec<Vec<f64>>> {
        self.0.generators().iter().map(rows).collect()
    }

    fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    fn vectorize(&self) -> PyZonotope {
        PyZonotope(self.0.vectorize())
    }

    fn minkowski_sum(&self, other: &Self) -> PyResult<Self> {
        self.0.minkowski_sum(&other.0).map(Self).map_err(to_py)
    }

    fn times_zonotope(&self, z: &PyZonotope) -> PyResult<PyZonotope> {
        self.0.times_zonotope(&z.0).map(PyZonotope).map_err(to_py)
    }

    #[pyo3(signature = (order, method = "norm_box"))]
    fn reduce(&self, order: usize, method: &str) -> PyResult<Self> {
        self.0.reduce_with(order, reduction(method)?).map(Self).map_err(to_py)
    }

    /// `(lower, upper)` entrywise bounds.
    fn interval(&self) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
        let i = self.0.interval();
        (rows(i.lower()), rows(i.upper()))
    }

    #[pyo3(signature = (m, tol = 1e-9))]
    fn contains(&self, m: Vec<Vec<f64>>, tol: f64) -> PyResult<bool> {
        self.0.contains(&matrix(&m)?, tol).map_err(to_py)
    }

    #[pyo3(signature = (count, seed = 0))]
    fn sample(&self, count: usize, seed: u64) -> Vec<Vec<Vec<f64>>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count).map(|_| rows(&self.0.sample(&mut rng))).collect()
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        serde_json::from_str(text).map(Self).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.0).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn __repr__(&self) -> String {
        let (r, c) = self.0.shape();
        format!("MatrixZonotope(shape=({r}, {c}), generators={})", self.0.num_generators())
    }
}

/// Set-valued recursive least squares over an `n × m` parameter matrix with
/// one measurement row per update.
#[pyclass(name = "Estimator", module = "zonoreach_py")]
struct PyEstimator(EstimatorState);

#[pymethods]
impl PyEstimator {
    #[new]
    #[pyo3(signature = (n, m, sigma_v, lam, sigma_theta = 0.0, tau = 1e7, g0_scale = 1.5, reduction_order = None))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        n: usize,
        m: usize,
        sigma_v: f64,
        lam: f64,
        sigma_theta: f64,
        tau: f64,
        g0_scale: f64,
        reduction_order: Option<usize>,
    ) -> PyResult<Self> {
        let noise = NoiseStructure::new(1, m, sigma_v).map_err(to_py)?;
        let drift = DriftStructure::new(n, m, sigma_theta).map_err(to_py)?;
        let order = reduction_order.unwrap_or(2 * n * m);
        EstimatorState::with_defaults(noise, drift, lam, tau, g0_scale, Some(order))
            .map(Self)
            .map_err(to_py)
    }

    /// Absorbs one regressor row `phi` (length `n`) and measurement `y` (length `m`).
    fn update(&mut self, phi: Vec<f64>, y: Vec<f64>) -> PyResult<()> {
        let phi = DMatrix::from_row_slice(1, phi.len(), &phi);
        let y = DMatrix::from_row_slice(1, y.len(), &y);
        self.0 = self.0.update(&phi, &y).map_err(to_py)?;
        Ok(())
    }

    /// Regressor for a linear (`[x u]`) or affine (`[1 x u]`) model.
    #[staticmethod]
    #[pyo3(signature = (x, u, affine = false))]
    fn regressor(x: Vec<f64>, u: Vec<f64>, affine: bool) -> Vec<f64> {
        let r = if affine { Regression::Affine } else { Regression::Linear };
        r.lift(&DVector::from_vec(x), &DVector::from_vec(u)).iter().copied().collect()
    }

    #[pyo3(signature = (transposed = false))]
    fn model_set(&self, transposed: bool) -> PyMatrixZonotope {
        PyMatrixZonotope(self.0.model_set(transposed))
    }

    #[getter]
    fn center(&self) -> Vec<Vec<f64>> {
        rows(self.0.center())
    }

    #[getter]
    fn covariance(&self) -> Vec<Vec<f64>> {
        rows(self.0.covariance())
    }

    #[getter]
    fn step(&self) -> usize {
        self.0.step()
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.0.to_snapshot()).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let snap = serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        EstimatorState::from_snapshot(&snap).map(Self).map_err(to_py)
    }
}

/// Runs a scenario config and writes its result directory; returns the manifest.
#[pyfunction]
#[pyo3(signature = (config, out, mode = None, seed = None))]
fn run_scenario(py: Python<'_>, config: PathBuf, out: PathBuf, mode: Option<&str>, seed: Option<u64>) -> PyResult<Py<PyAny>> {
    let cfg = ScenarioConfig::load(&config).map_err(to_py)?;
    let mode = match mode {
        Some(m) => m.parse().map_err(to_py)?,
        None => cfg.mode.unwrap_or(Mode::Ltv),
    };
    let seed = seed.unwrap_or(cfg.validation.seed);
    let manifest = py
        .detach(|| {
            let run = scenario::run(&cfg, mode, seed, None, None)?;
            scenario::write_run(&out, &cfg, &run)
        })
        .map_err(to_py)?;
    json_loads(py, serde_json::to_string(&manifest).map_err(|e| PyValueError::new_err(e.to_string()))?)
}

/// Validates a result directory; returns the validation report.
#[pyfunction]
#[pyo3(signature = (dir, n_traj = None))]
fn validate_run(py: Python<'_>, dir: PathBuf, n_traj: Option<usize>) -> PyResult<Py<PyAny>> {
    let report = py.detach(|| scenario::validate_dir(&dir, None, n_traj)).map_err(to_py)?;
    json_loads(py, serde_json::to_string(&report).map_err(|e| PyValueError::new_err(e.to_string()))?)
}

#[pymodule]
fn zonoreach_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyZonotope>()?;
    m.add_class::<PyMatrixZonotope>()?;
    m.add_class::<PyEstimator>()?;
    m.add_function(wrap_pyfunction!(run_scenario, m)?)?;
    m.add_function(wrap_pyfunction!(validate_run, m)?)?;
    Ok(())
}
