//! Reachability for linear time-varying plants with a drifting `[A B]`.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{check_sets, covering_radius, epsilon_zonotope, Propagation, ReachDiagnostics, ReachResult};
use crate::error::{Error, Result};
use crate::estimator::EstimatorState;
use crate::harness::SlidingWindow;
use crate::sets::{MatrixZonotope, Zonotope};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LtvReachConfig {
    /// Entrywise per-step drift bound `σ_AB` on `[A B]`.
    pub sigma_ab: f64,
    /// One input set per step; the horizon is their count.
    pub input_sets: Vec<Zonotope>,
    pub noise_set: Zonotope,
    pub initial_set: Zonotope,
    pub reduction_order: usize,
    /// Drift steps between the data the model set describes and the first
    /// propagated step. The estimator's latest update describes the model one
    /// step before the current state, hence the default of 1.
    #[serde(default = "default_offset")]
    pub drift_offset: usize,
    /// Replaces the covering radius of the window when set.
    #[serde(default)]
    pub delta_override: Option<f64>,
}

fn default_offset() -> usize {
    1
}

impl LtvReachConfig {
    /// Config with the same input set at every step.
    pub fn new(
        horizon: usize,
        sigma_ab: f64,
        input_set: Zonotope,
        noise_set: Zonotope,
        initial_set: Zonotope,
        reduction_order: usize,
    ) -> Self {
        Self {
            sigma_ab,
            input_sets: vec![input_set; horizon],
            noise_set,
            initial_set,
            reduction_order,
            drift_offset: 1,
            delta_override: None,
        }
    }

    pub fn horizon(&self) -> usize {
        self.input_sets.len()
    }
}

/// Reachable sets from the estimator's current model set, with the covering
/// radius taken from `window`.
pub fn reach_ltv(estimator: &EstimatorState, window: &SlidingWindow, cfg: &LtvReachConfig) -> Result<ReachResult> {
    if window.is_empty() {
        return Err(Error::InvalidArgument("empty window".into()));
    }
    let delta_hat = match cfg.delta_override {
        Some(d) => d,
        None => covering_radius(&window.points())?,
    };
    reach_ltv_from_model(&estimator.model_set(true), delta_hat, cfg)
}

/// Reachable sets for a given `n_x × (n_x + n_u)` model set and covering radius.
pub fn reach_ltv_from_model(model: &MatrixZonotope, delta_hat: f64, cfg: &LtvReachConfig) -> Result<ReachResult> {
    let t0 = Instant::now();
    let (nx, _) = check_sets(model, &cfg.initial_set, &cfg.input_sets, &cfg.noise_set, false)?;
    let prop = Propagation {
        model,
        sigma: cfg.sigma_ab,
        drift_offset: cfg.drift_offset,
        initial: &cfg.initial_set,
        inputs: &cfg.input_sets,
        reduction_order: cfg.reduction_order,
        affine: false,
    };
    let models = prop.model_sets()?;
    let i_m_max = models
        .iter()
        .map(|m| m.interval().frobenius())
        .fold(0.0, f64::max);
    let additive = epsilon_zonotope(i_m_max, delta_hat, nx)?.minkowski_sum(&cfg.noise_set)?;
    let diag = ReachDiagnostics {
        generator_counts: Vec::new(),
        delta_hat,
        i_m_max: Some(i_m_max),
        lipschitz: None,
        wall_time_s: 0.0,
    };
    prop.run(&models, &additive, diag, t0)
}
