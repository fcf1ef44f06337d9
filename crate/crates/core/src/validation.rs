//! Monte-Carlo checks of reachable sets against simulated ground truth.

use std::path::Path;

use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::harness::{simulate, Plant, Trajectory};
use crate::reach::ReachResult;
use crate::sets::{contains_point, Zonotope, DEFAULT_TOL};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub trajectory: usize,
    pub step: usize,
    pub state: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    /// Trajectory `i` is replayed with `ChaCha8Rng::seed_from_u64(seed)` on stream `i`.
    pub seed: u64,
    pub trajectories_sampled: usize,
    pub diverged: usize,
    pub containment_checks: usize,
    pub violations: Vec<Violation>,
    /// Sum of interval-hull half-widths per step.
    pub per_step_set_radius: Vec<f64>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }

    /// Summary with columns `step,set_radius,violations`.
    pub fn write_summary_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["step", "set_radius", "violations"])?;
        for (k, r) in self.per_step_set_radius.iter().enumerate() {
            let v = self.violations.iter().filter(|v| v.step == k).count();
            w.write_record([k.to_string(), format!("{r:e}"), v.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Per-step sum of interval-hull half-widths.
pub fn conservatism_metric(sets: &[Zonotope]) -> Vec<f64> {
    sets.iter().map(|z| z.hull_radius().sum()).collect()
}

/// Samples `n` trajectories of length `input_sets.len()` starting at plant time
/// `start`, with `x_0` and every input drawn uniformly from their sets.
pub fn sample_trajectories(
    plant: &Plant,
    start: usize,
    x0_set: &Zonotope,
    input_sets: &[Zonotope],
    n: usize,
    seed: u64,
) -> Result<Vec<Trajectory>> {
    (0..n)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let x0 = x0_set.sample(&mut rng);
            let inputs: Vec<DVector<f64>> = input_sets.iter().map(|u| u.sample(&mut rng)).collect();
            simulate(plant, start, &x0, &inputs, &mut rng)
        })
        .collect()
}

/// Checks `states[k] ∈ sets[k]` for `k ≥ 1` on every trajectory.
pub fn check_trajectories(sets: &[Zonotope], trajectories: &[Trajectory], seed: u64) -> Result<ValidationReport> {
    let mut report = ValidationReport {
        seed,
        trajectories_sampled: trajectories.len(),
        diverged: 0,
        containment_checks: 0,
        violations: Vec::new(),
        per_step_set_radius: conservatism_metric(sets),
    };
    for (i, t) in trajectories.iter().enumerate() {
        if t.diverged {
            report.diverged += 1;
        }
        for (k, x) in t.states.iter().enumerate().skip(1).take(sets.len().saturating_sub(1)) {
            check_dim("validated state", sets[k].dim(), x.len())?;
            report.containment_checks += 1;
            if !contains_point(&sets[k], x, DEFAULT_TOL)? {
                report.violations.push(Violation {
                    trajectory: i,
                    step: k,
                    state: x.as_slice().to_vec(),
                });
            }
        }
    }
    Ok(report)
}

/// Samples `n_traj` ground-truth runs from plant time `start` and checks them
/// against `reach`.
pub fn validate_reach(
    reach: &ReachResult,
    plant: &Plant,
    start: usize,
    x0_set: &Zonotope,
    input_sets: &[Zonotope],
    n_traj: usize,
    seed: u64,
) -> Result<ValidationReport> {
    if input_sets.len() < reach.horizon() {
        return Err(Error::InvalidArgument(format!(
            "{} input sets for a horizon of {}",
            input_sets.len(),
            reach.horizon()
        )));
    }
    let trajs = sample_trajectories(plant, start, x0_set, &input_sets[..reach.horizon()], n_traj, seed)?;
    check_trajectories(&reach.sets, &trajs, seed)
}
