//! Reachable sets of unknown systems from data-driven model sets.
//!
//! Both algorithms iterate `R_{k+1} = M_k (lift(R_k, U_k)) ⊕ Z`, where `M_k`
//! is the learned model set widened by `k` steps of worst-case drift and `Z`
//! collects noise, the gap between data points and the rest of the domain,
//! and (for nonlinear plants) the linearization remainder.

mod lipschitz;
mod ltv;

use std::path::Path;
use std::time::Instant;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::sets::{entrywise_box, MatrixZonotope, Zonotope};

pub use lipschitz::{
    eps_bar_zonotope, lagrange_bounds, lipschitz_estimate, reach_lipschitz, reach_lipschitz_from_model,
    remainder_zonotope, LipReachConfig,
};
pub use ltv::{reach_ltv, reach_ltv_from_model, LtvReachConfig};

/// Pairs of points closer than this are treated as coincident.
pub const COINCIDENT_EPS: f64 = 1e-12;

/// Matrix zonotope covering `k` steps of entrywise drift bounded by `mu`.
pub fn perturbation_matzono(k: usize, mu: f64, rows: usize, cols: usize) -> Result<MatrixZonotope> {
    if !(mu >= 0.0) || !mu.is_finite() {
        return Err(Error::InvalidArgument(format!("drift bound {mu} must be finite and >= 0")));
    }
    Ok(entrywise_box(rows, cols, k as f64 * mu))
}

/// `δ̂ = max_i min_{j≠i} ‖z_i − z_j‖`.
pub fn covering_radius(points: &[DVector<f64>]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "covering radius needs at least 2 points, got {}",
            points.len()
        )));
    }
    let mut worst: f64 = 0.0;
    for (i, zi) in points.iter().enumerate() {
        let nearest = points
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, zj)| (zi - zj).norm())
            .fold(f64::INFINITY, f64::min);
        worst = worst.max(nearest);
    }
    Ok(worst)
}

/// `Z_ε = ⟨0, diag(I_M_max δ̂ / 2)⟩`.
pub fn epsilon_zonotope(i_m_max: f64, delta_hat: f64, nx: usize) -> Result<Zonotope> {
    if !(i_m_max >= 0.0 && delta_hat >= 0.0) {
        return Err(Error::InvalidArgument("I_M_max and δ̂ must be >= 0".into()));
    }
    Zonotope::boxed(DVector::zeros(nx), &DVector::from_element(nx, i_m_max * delta_hat / 2.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LipschitzDiagnostics {
    pub l_lo: Vec<f64>,
    pub l_hi: Vec<f64>,
    pub l_hat: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReachDiagnostics {
    /// Generators of each new set before reduction.
    pub generator_counts: Vec<usize>,
    pub delta_hat: f64,
    /// Largest interval Frobenius norm over the horizon's model sets (linear case).
    pub i_m_max: Option<f64>,
    pub lipschitz: Option<LipschitzDiagnostics>,
    pub wall_time_s: f64,
}

/// `sets[0]` is the initial set; `sets[k]` over-approximates the states at step `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReachResult {
    pub sets: Vec<Zonotope>,
    pub diagnostics: ReachDiagnostics,
}

impl ReachResult {
    pub fn horizon(&self) -> usize {
        self.sets.len().saturating_sub(1)
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }

    pub fn read_json(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }

    /// Interval-hull bounds with columns `step,dim,lower,upper`.
    pub fn write_bounds_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["step", "dim", "lower", "upper"])?;
        for (k, z) in self.sets.iter().enumerate() {
            let hull = z.interval_hull();
            for d in 0..z.dim() {
                w.write_record([
                    k.to_string(),
                    d.to_string(),
                    format!("{:e}", hull.lower()[d]),
                    format!("{:e}", hull.upper()[d]),
                ])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

/// Settings shared by both propagation loops.
struct Propagation<'a> {
    model: &'a MatrixZonotope,
    sigma: f64,
    drift_offset: usize,
    initial: &'a Zonotope,
    inputs: &'a [Zonotope],
    reduction_order: usize,
    affine: bool,
}

impl Propagation<'_> {
    /// `M_k = ⟨C, [G, G_M̂_{k+offset}]⟩` for `k = 0..N`.
    fn model_sets(&self) -> Result<Vec<MatrixZonotope>> {
        let (rows, cols) = self.model.shape();
        (0..self.inputs.len())
            .map(|k| {
                let pert = perturbation_matzono(k + self.drift_offset, self.sigma, rows, cols)?;
                self.model.with_extra_generators(pert.generators())
            })
            .collect()
    }

    fn run(&self, models: &[MatrixZonotope], additive: &Zonotope, mut diag: ReachDiagnostics, t0: Instant) -> Result<ReachResult> {
        let nx = self.initial.dim();
        check_dim("additive set", nx, additive.dim())?;
        let mut sets = Vec::with_capacity(self.inputs.len() + 1);
        sets.push(self.initial.clone());
        for (m, u) in models.iter().zip(self.inputs) {
            let r = sets.last().expect("nonempty");
            let mut lifted = r.cartesian_product(u);
            if self.affine {
                lifted = Zonotope::point(DVector::from_element(1, 1.0)).cartesian_product(&lifted);
            }
            let next = m.times_zonotope(&lifted)?.minkowski_sum(additive)?;
            if next.center().iter().chain(next.generators().iter()).any(|v| !v.is_finite()) {
                return Err(Error::NonFinite(format!("reachable set at step {}", sets.len())));
            }
            diag.generator_counts.push(next.num_generators());
            sets.push(next.reduce(self.reduction_order)?);
        }
        diag.wall_time_s = t0.elapsed().as_secs_f64();
        Ok(ReachResult { sets, diagnostics: diag })
    }
}

fn check_sets(model: &MatrixZonotope, initial: &Zonotope, inputs: &[Zonotope], noise: &Zonotope, affine: bool) -> Result<(usize, usize)> {
    if inputs.is_empty() {
        return Err(Error::InvalidArgument("horizon must be at least 1".into()));
    }
    let nx = initial.dim();
    let nu = inputs[0].dim();
    for u in inputs {
        check_dim("input set", nu, u.dim())?;
    }
    check_dim("noise set", nx, noise.dim())?;
    let (rows, cols) = model.shape();
    check_dim("model rows", nx, rows)?;
    check_dim("model columns", usize::from(affine) + nx + nu, cols)?;
    Ok((nx, nu))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{dvector, DMatrix};

    #[test]
    fn perturbation_examples() {
        assert_eq!(perturbation_matzono(0, 0.1, 2, 2).unwrap().num_generators(), 0);
        let p = perturbation_matzono(3, 0.1, 1, 2).unwrap();
        assert_eq!(p.num_generators(), 2);
        assert!((p.generators()[0][(0, 0)] - 0.3).abs() < 1e-15);
        assert_eq!(p.generators()[0][(0, 1)], 0.0);
        assert!((p.generators()[1][(0, 1)] - 0.3).abs() < 1e-15);
        assert!(perturbation_matzono(1, -1.0, 1, 1).is_err());
    }

    #[test]
    fn covering_radius_examples() {
        assert_eq!(covering_radius(&[dvector![0.0], dvector![1.0]]).unwrap(), 1.0);
        let grid: Vec<_> = (0..7).map(|i| dvector![0.25 * i as f64]).collect();
        assert_eq!(covering_radius(&grid).unwrap(), 0.25);
        assert!(covering_radius(&[dvector![0.0]]).is_err());
    }

    #[test]
    fn epsilon_examples() {
        assert!(epsilon_zonotope(3.0, 0.0, 2).unwrap().is_singleton());
        let z = epsilon_zonotope(2.0, 1.0, 2).unwrap();
        assert_eq!(z.generators(), &DMatrix::identity(2, 2));
        assert_eq!(z.hull_radius(), dvector![1.0, 1.0]);
    }
}
