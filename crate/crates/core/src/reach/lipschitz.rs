//! Reachability for Lipschitz nonlinear plants through an affine model set,
//! a data-driven linearization remainder `Z_L` and a Lipschitz gap `Z_ε̄`.

use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{
    check_sets, covering_radius, LipschitzDiagnostics, Propagation, ReachDiagnostics, ReachResult,
    COINCIDENT_EPS,
};
use crate::error::{check_dim, Error, Result};
use crate::estimator::{EstimatorState, Regression};
use crate::harness::SlidingWindow;
use crate::sets::{MatrixZonotope, Zonotope};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LipReachConfig {
    /// Entrywise per-step drift bound `σ_M` on the affine model `[Δf A B]`.
    pub sigma_m: f64,
    pub input_sets: Vec<Zonotope>,
    pub noise_set: Zonotope,
    pub initial_set: Zonotope,
    pub reduction_order: usize,
    #[serde(default)]
    pub drift_offset: usize,
    #[serde(default)]
    pub delta_override: Option<f64>,
}

impl LipReachConfig {
    pub fn new(
        horizon: usize,
        sigma_m: f64,
        input_set: Zonotope,
        noise_set: Zonotope,
        initial_set: Zonotope,
        reduction_order: usize,
    ) -> Self {
        Self {
            sigma_m,
            input_sets: vec![input_set; horizon],
            noise_set,
            initial_set,
            reduction_order,
            drift_offset: 0,
            delta_override: None,
        }
    }

    pub fn horizon(&self) -> usize {
        self.input_sets.len()
    }
}

/// Elementwise bounds of the residuals `x⁺_j − C_M [1; x_j; u_j]` over the window.
pub fn lagrange_bounds(window: &SlidingWindow, c_m: &DMatrix<f64>) -> Result<(DVector<f64>, DVector<f64>)> {
    if window.is_empty() {
        return Err(Error::InvalidArgument("empty window".into()));
    }
    let (nx, nu) = window.dims();
    check_dim("model rows", nx, c_m.nrows())?;
    check_dim("model columns", 1 + nx + nu, c_m.ncols())?;
    let mut lo = DVector::from_element(nx, f64::INFINITY);
    let mut hi = DVector::from_element(nx, f64::NEG_INFINITY);
    for t in window.transitions() {
        let r = &t.x_next - c_m * Regression::Affine.lift(&t.x, &t.u);
        lo = lo.inf(&r);
        hi = hi.sup(&r);
    }
    Ok((lo, hi))
}

/// `Z_L`, the box `[l_lo, l_hi]`.
pub fn remainder_zonotope(l_lo: &DVector<f64>, l_hi: &DVector<f64>) -> Result<Zonotope> {
    Zonotope::from_bounds(l_lo, l_hi)
}

/// Per-dimension largest slope `|x⁺_i − x⁺_j| / ‖z_i − z_j‖` over all pairs,
/// with successor states standing in for `f`.
pub fn lipschitz_estimate(window: &SlidingWindow) -> Result<DVector<f64>> {
    let pts = window.points();
    if pts.len() < 2 {
        return Err(Error::InvalidArgument("Lipschitz estimate needs at least 2 points".into()));
    }
    let succ: Vec<&DVector<f64>> = window.transitions().map(|t| &t.x_next).collect();
    let nx = window.dims().0;
    let mut best = DVector::zeros(nx);
    let mut any = false;
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            let dist = (&pts[i] - &pts[j]).norm();
            if dist < COINCIDENT_EPS {
                continue;
            }
            any = true;
            for o in 0..nx {
                best[o] = f64::max(best[o], (succ[i][o] - succ[j][o]).abs() / dist);
            }
        }
    }
    if !any {
        return Err(Error::InvalidArgument("all window points coincide".into()));
    }
    Ok(best)
}

/// `Z_ε̄ = ⟨0, diag(L̂ δ̂ / 2)⟩`.
pub fn eps_bar_zonotope(l_hat: &DVector<f64>, delta_hat: f64) -> Result<Zonotope> {
    if !(delta_hat >= 0.0) || l_hat.iter().any(|v| !(*v >= 0.0)) {
        return Err(Error::InvalidArgument("L̂ and δ̂ must be >= 0".into()));
    }
    Zonotope::boxed(DVector::zeros(l_hat.len()), &(l_hat * (delta_hat / 2.0)))
}

/// Reachable sets from the estimator's affine model set and the window data.
pub fn reach_lipschitz(estimator: &EstimatorState, window: &SlidingWindow, cfg: &LipReachConfig) -> Result<ReachResult> {
    reach_lipschitz_from_model(&estimator.model_set(true), window, cfg)
}

/// Reachable sets for an `n_x × (1 + n_x + n_u)` model set; `Z_L`, `L̂` and
/// `δ̂` come from `data` and stay fixed over the horizon.
pub fn reach_lipschitz_from_model(model: &MatrixZonotope, data: &SlidingWindow, cfg: &LipReachConfig) -> Result<ReachResult> {
    let t0 = Instant::now();
    let (nx, nu) = check_sets(model, &cfg.initial_set, &cfg.input_sets, &cfg.noise_set, true)?;
    check_dim("window state", nx, data.dims().0)?;
    check_dim("window input", nu, data.dims().1)?;

    let (l_lo, l_hi) = lagrange_bounds(data, model.center())?;
    let z_l = remainder_zonotope(&l_lo, &l_hi)?;
    let delta_hat = match cfg.delta_override {
        Some(d) => d,
        None => covering_radius(&data.points())?,
    };
    let l_hat = lipschitz_estimate(data)?;
    let additive = z_l
        .minkowski_sum(&eps_bar_zonotope(&l_hat, delta_hat)?)?
        .minkowski_sum(&cfg.noise_set)?;

    let prop = Propagation {
        model,
        sigma: cfg.sigma_m,
        drift_offset: cfg.drift_offset,
        initial: &cfg.initial_set,
        inputs: &cfg.input_sets,
        reduction_order: cfg.reduction_order,
        affine: true,
    };
    let models = prop.model_sets()?;
    let diag = ReachDiagnostics {
        generator_counts: Vec::new(),
        delta_hat,
        i_m_max: None,
        lipschitz: Some(LipschitzDiagnostics {
            l_lo: l_lo.as_slice().to_vec(),
            l_hi: l_hi.as_slice().to_vec(),
            l_hat: l_hat.as_slice().to_vec(),
        }),
        wall_time_s: 0.0,
    };
    prop.run(&models, &additive, diag, t0)
}
