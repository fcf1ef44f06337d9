//! Set-valued recursive least squares with exponential forgetting.
//!
//! The estimator tracks a matrix zonotope `⟨C_k, {G_k^(i)}⟩` that contains the
//! unknown, slowly drifting parameter matrix `θ_k` of the regression
//! `y_k = φ_k θ_k + v_k` with `‖v_k‖_max ≤ σ_v`. A covariance `P_k` is carried
//! alongside the generators and fixes the gain; the generators only describe
//! the set.

use log::warn;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::sets::json::{matrix_to_rows, rows_to_matrix};
use crate::sets::{MatrixZonotope, Reduction};

/// Relative bound below which `I − Kφ` is reported as nearly singular.
pub const RANK_WARN_RTOL: f64 = 1e-15;

/// Relative tolerance on negative covariance eigenvalues before failing.
pub const PD_RTOL: f64 = 1e-9;

fn single_entry_basis(rows: usize, cols: usize, value: f64) -> Vec<DMatrix<f64>> {
    let mut out = Vec::with_capacity(rows * cols);
    for j in 0..cols {
        for i in 0..rows {
            let mut e = DMatrix::zeros(rows, cols);
            e[(i, j)] = value;
            out.push(e);
        }
    }
    out
}

/// Bounded measurement noise `‖v‖_max ≤ σ_v` on `p × m` outputs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseStructure {
    pub p: usize,
    pub m: usize,
    pub sigma_v: f64,
}

impl NoiseStructure {
    pub fn new(p: usize, m: usize, sigma_v: f64) -> Result<Self> {
        if !(sigma_v >= 0.0) || !sigma_v.is_finite() {
            return Err(Error::InvalidArgument(format!("noise bound {sigma_v} must be finite and >= 0")));
        }
        Ok(Self { p, m, sigma_v })
    }

    /// The `pm` single-entry generators `Q_v^(l)`, column-major over positions.
    pub fn basis(&self) -> Vec<DMatrix<f64>> {
        single_entry_basis(self.p, self.m, self.sigma_v)
    }

    /// `Q = Σ_l Q_v^(l) Q_v^(l)ᵀ`, which equals `m σ_v² I_p`.
    pub fn q_matrix(&self) -> DMatrix<f64> {
        let mut q = DMatrix::zeros(self.p, self.p);
        for b in self.basis() {
            q += &b * b.transpose();
        }
        q
    }
}

/// Bounded parameter drift `‖δθ‖_max ≤ σ_θ` on `n × m` parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriftStructure {
    pub n: usize,
    pub m: usize,
    pub sigma_theta: f64,
}

impl DriftStructure {
    pub fn new(n: usize, m: usize, sigma_theta: f64) -> Result<Self> {
        if !(sigma_theta >= 0.0) || !sigma_theta.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "drift bound {sigma_theta} must be finite and >= 0"
            )));
        }
        Ok(Self { n, m, sigma_theta })
    }

    pub fn basis(&self) -> Vec<DMatrix<f64>> {
        single_entry_basis(self.n, self.m, self.sigma_theta)
    }
}

/// How a state/input pair is turned into a regressor row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regression {
    /// `φ = [xᵀ uᵀ]`, `θ = [A B]ᵀ`.
    Linear,
    /// `φ = [1 xᵀ uᵀ]`, `θ = [Δf A B]ᵀ`.
    Affine,
}

impl Regression {
    pub fn regressor_len(self, nx: usize, nu: usize) -> usize {
        match self {
            Regression::Linear => nx + nu,
            Regression::Affine => 1 + nx + nu,
        }
    }

    /// Column vector `z` such that `x⁺ ≈ θᵀ z`.
    pub fn lift(self, x: &DVector<f64>, u: &DVector<f64>) -> DVector<f64> {
        let offset = usize::from(self == Regression::Affine);
        let mut z = DVector::zeros(offset + x.len() + u.len());
        if offset == 1 {
            z[0] = 1.0;
        }
        z.rows_mut(offset, x.len()).copy_from(x);
        z.rows_mut(offset + x.len(), u.len()).copy_from(u);
        z
    }

    /// Row regressor `φ = zᵀ`.
    pub fn regressor(self, x: &DVector<f64>, u: &DVector<f64>) -> DMatrix<f64> {
        let z = self.lift(x, u);
        DMatrix::from_row_slice(1, z.len(), z.as_slice())
    }
}

/// Measurement row `y = x⁺ᵀ`.
pub fn target(x_next: &DVector<f64>) -> DMatrix<f64> {
    DMatrix::from_row_slice(1, x_next.len(), x_next.as_slice())
}

/// Optimal gain `K = P φᵀ Λ⁻¹` with `Λ = φ P φᵀ + λ Q`.
pub fn optimal_gain(
    p: &DMatrix<f64>,
    phi: &DMatrix<f64>,
    lambda: f64,
    q: &DMatrix<f64>,
) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    check_dim("gain covariance", p.nrows(), phi.ncols())?;
    check_dim("gain noise matrix", phi.nrows(), q.nrows())?;
    let big_lambda = phi * p * phi.transpose() + q * lambda;
    let inv = invert_spd_or_general(&big_lambda)
        .ok_or_else(|| Error::Singular("innovation matrix φPφᵀ + λQ is singular".into()))?;
    Ok((p * phi.transpose() * inv, big_lambda))
}

fn invert_spd_or_general(m: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    if m.iter().all(|v| *v == 0.0) {
        return None;
    }
    if m.shape() == (1, 1) {
        return m[(0, 0)].is_finite().then(|| DMatrix::from_element(1, 1, 1.0 / m[(0, 0)]));
    }
    if let Some(ch) = m.clone().cholesky() {
        return Some(ch.inverse());
    }
    m.clone().try_inverse()
}

/// Diagnostics from one update.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UpdateDiagnostics {
    /// Smallest singular value of `I − Kφ` relative to its largest.
    pub rank_margin: f64,
    pub min_covariance_eigenvalue: f64,
    pub generators_before_reduction: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimatorState {
    center: DMatrix<f64>,
    generators: Vec<DMatrix<f64>>,
    covariance: DMatrix<f64>,
    lambda: f64,
    noise: NoiseStructure,
    drift: DriftStructure,
    reduction_order: Option<usize>,
    reduction_method: ParameterReduction,
    step: usize,
}

impl EstimatorState {
    /// Validated initial state.
    ///
    /// `reduction_order = None` keeps every generator.
    #[allow(clippy::too_many_arguments)]
    pub fn init(
        center: DMatrix<f64>,
        generators: Vec<DMatrix<f64>>,
        covariance: DMatrix<f64>,
        lambda: f64,
        noise: NoiseStructure,
        drift: DriftStructure,
        reduction_order: Option<usize>,
    ) -> Result<Self> {
        let (n, m) = center.shape();
        if !(lambda > 0.0 && lambda <= 1.0) {
            return Err(Error::InvalidArgument(format!("forgetting factor {lambda} outside (0, 1]")));
        }
        check_dim("covariance rows", n, covariance.nrows())?;
        check_dim("covariance cols", n, covariance.ncols())?;
        check_dim("noise output columns", m, noise.m)?;
        check_dim("drift rows", n, drift.n)?;
        check_dim("drift cols", m, drift.m)?;
        if let Some(q) = reduction_order {
            if q < n * m {
                return Err(Error::InvalidArgument(format!(
                    "reduction order {q} below parameter count {}",
                    n * m
                )));
            }
        }
        let set = MatrixZonotope::new(center.clone(), generators)?;
        let rank = set
            .vectorize()
            .generators()
            .clone()
            .svd(false, false)
            .rank(1e-12);
        if rank < n * m {
            return Err(Error::RankDeficient(format!(
                "initial generators span rank {rank}, need {}",
                n * m
            )));
        }
        if (&covariance - covariance.transpose()).amax() > 1e-12 * covariance.amax().max(1.0)
            || covariance.clone().cholesky().is_none()
        {
            return Err(Error::NotPositiveDefinite("initial covariance".into()));
        }
        Ok(Self {
            center,
            generators: set.generators().to_vec(),
            covariance,
            lambda,
            noise,
            drift,
            reduction_order,
            reduction_method: ParameterReduction::default(),
            step: 0,
        })
    }

    /// `C₀ = 0`, `P₀ = τ I`, `G₀ = {scale · E_i}`.
    pub fn with_defaults(
        noise: NoiseStructure,
        drift: DriftStructure,
        lambda: f64,
        tau: f64,
        g0_scale: f64,
        reduction_order: Option<usize>,
    ) -> Result<Self> {
        let (n, m) = (drift.n, drift.m);
        Self::init(
            DMatrix::zeros(n, m),
            single_entry_basis(n, m, g0_scale),
            DMatrix::identity(n, n) * tau,
            lambda,
            noise,
            drift,
            reduction_order,
        )
    }

    pub fn center(&self) -> &DMatrix<f64> {
        &self.center
    }

    pub fn generators(&self) -> &[DMatrix<f64>] {
        &self.generators
    }

    pub fn covariance(&self) -> &DMatrix<f64> {
        &self.covariance
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn noise(&self) -> &NoiseStructure {
        &self.noise
    }

    pub fn drift(&self) -> &DriftStructure {
        &self.drift
    }

    pub fn reduction_order(&self) -> Option<usize> {
        self.reduction_order
    }

    pub fn reduction_method(&self) -> ParameterReduction {
        self.reduction_method
    }

    pub fn with_reduction_method(mut self, method: ParameterReduction) -> Self {
        self.reduction_method = method;
        self
    }

    pub fn step(&self) -> usize {
        self.step
    }

    /// `(n, m)` shape of the parameter matrix.
    pub fn shape(&self) -> (usize, usize) {
        self.center.shape()
    }

    /// The current parameter set `⟨C_k, G_k⟩`, or its transpose when `transposed`.
    pub fn model_set(&self, transposed: bool) -> MatrixZonotope {
        let set = MatrixZonotope::new(self.center.clone(), self.generators.clone())
            .expect("estimator keeps consistent shapes");
        if transposed {
            set.transpose()
        } else {
            set
        }
    }

    pub fn update(&self, phi: &DMatrix<f64>, y: &DMatrix<f64>) -> Result<Self> {
        self.update_with_diagnostics(phi, y).map(|(s, _)| s)
    }

    /// One measurement update; returns the new state and its diagnostics.
    pub fn update_with_diagnostics(
        &self,
        phi: &DMatrix<f64>,
        y: &DMatrix<f64>,
    ) -> Result<(Self, UpdateDiagnostics)> {
        let (n, m) = self.shape();
        check_dim("regressor columns", n, phi.ncols())?;
        check_dim("regressor rows", self.noise.p, phi.nrows())?;
        check_dim("measurement rows", self.noise.p, y.nrows())?;
        check_dim("measurement cols", m, y.ncols())?;
        if phi.iter().chain(y.iter()).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("measurement at step {}", self.step)));
        }

        let q = self.noise.q_matrix();
        let (k, _) = optimal_gain(&self.covariance, phi, self.lambda, &q)?;
        let contraction = DMatrix::identity(n, n) - &k * phi;

        let svals = contraction.clone().svd(false, false).singular_values;
        let smax = svals.max();
        let rank_margin = if smax > 0.0 { svals.min() / smax } else { 0.0 };
        if rank_margin == 0.0 {
            return Err(Error::RankDeficient(format!(
                "I − Kφ lost rank at step {}",
                self.step
            )));
        }
        if rank_margin <= RANK_WARN_RTOL {
            warn!(
                "I − Kφ nearly singular at step {} (relative margin {rank_margin:e})",
                self.step
            );
        }

        let center = &contraction * &self.center + &k * y;
        let inflate = self.lambda.powf(-0.5);
        // prior Θ_k ⊕ ⟨0, G_θ⟩ covers one step of drift before the correction
        let drift = if self.drift.sigma_theta > 0.0 { self.drift.basis() } else { Vec::new() };
        let mut generators: Vec<DMatrix<f64>> = self
            .generators
            .iter()
            .chain(&drift)
            .map(|g| &contraction * g * inflate)
            .collect();
        generators.extend(self.noise.basis().iter().map(|qv| -(&k * qv)));
        let set = MatrixZonotope::new(center, generators)?;
        let generators_before_reduction = set.num_generators();

        let mut p_next = &contraction * &self.covariance / self.lambda;
        p_next = (&p_next + p_next.transpose()) * 0.5;
        if p_next.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("covariance at step {}", self.step + 1)));
        }
        let eigen = p_next.clone().symmetric_eigen();
        let (min_eig, max_eig) = (eigen.eigenvalues.min(), eigen.eigenvalues.max());
        if min_eig <= -PD_RTOL * max_eig.abs().max(f64::MIN_POSITIVE) || max_eig <= 0.0 {
            return Err(Error::NotPositiveDefinite(format!(
                "covariance at step {} has eigenvalue {min_eig:e} (max {max_eig:e})",
                self.step + 1
            )));
        }

        let set = match (self.reduction_order, self.reduction_method.set_method()) {
            (None, _) => set,
            (Some(order), Some(method)) => set.reduce_with(order, method)?,
            (Some(order), None) => {
                // box along the eigenvectors of P⁺, separately for each column of Θ
                let (_, m) = set.shape();
                let frame = DMatrix::<f64>::identity(m, m).kronecker(&eigen.eigenvectors);
                let z = set.vectorize().reduce_in_frame(order, &frame)?;
                MatrixZonotope::unvectorize(&z, set.shape())?
            }
        };

        let next = Self {
            center: set.center().clone(),
            generators: set.generators().to_vec(),
            covariance: p_next,
            lambda: self.lambda,
            noise: self.noise,
            drift: self.drift,
            reduction_order: self.reduction_order,
            reduction_method: self.reduction_method,
            step: self.step + 1,
        };
        Ok((
            next,
            UpdateDiagnostics {
                rank_margin,
                min_covariance_eigenvalue: min_eig,
                generators_before_reduction,
            },
        ))
    }

    pub fn to_snapshot(&self) -> EstimatorSnapshot {
        EstimatorSnapshot {
            center: matrix_to_rows(&self.center),
            generators: self.generators.iter().map(matrix_to_rows).collect(),
            covariance: matrix_to_rows(&self.covariance),
            lambda: self.lambda,
            step: self.step,
            noise: self.noise,
            drift: self.drift,
            reduction_order: self.reduction_order,
            reduction_method: self.reduction_method,
        }
    }

    /// Restores a checkpoint. Only shapes and `λ` are checked; the generator
    /// rank condition applies to fresh initial sets, not to resumed ones.
    pub fn from_snapshot(s: &EstimatorSnapshot) -> Result<Self> {
        let center = rows_to_matrix(&s.center)?;
        let covariance = rows_to_matrix(&s.covariance)?;
        let generators = s
            .generators
            .iter()
            .map(|g| rows_to_matrix(g))
            .collect::<Result<Vec<_>>>()?;
        if !(s.lambda > 0.0 && s.lambda <= 1.0) {
            return Err(Error::InvalidArgument(format!("forgetting factor {} outside (0, 1]", s.lambda)));
        }
        let (n, m) = center.shape();
        check_dim("snapshot covariance", n, covariance.nrows())?;
        check_dim("snapshot covariance", n, covariance.ncols())?;
        check_dim("snapshot noise", m, s.noise.m)?;
        let set = MatrixZonotope::new(center, generators)?;
        Ok(Self {
            center: set.center().clone(),
            generators: set.generators().to_vec(),
            covariance,
            lambda: s.lambda,
            noise: s.noise,
            drift: s.drift,
            reduction_order: s.reduction_order,
            reduction_method: s.reduction_method,
            step: s.step,
        })
    }
}

/// How the estimator trims its generator list back to the reduction order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParameterReduction {
    /// Norm-sorted, with the discarded generators boxed along the eigenvectors
    /// of the updated covariance. Every generator lies in the range of `P`
    /// times a regressor sum, and the update carries one eigenbasis of `P`
    /// close to the next, so repeated boxing wraps far less than an
    /// axis-aligned box.
    #[default]
    CovarianceFrame,
    /// Axis-aligned norm-sorted box.
    NormBox,
    Girard,
    Pca,
}

impl ParameterReduction {
    fn set_method(self) -> Option<Reduction> {
        match self {
            Self::CovarianceFrame => None,
            Self::NormBox => Some(Reduction::NormBox),
            Self::Girard => Some(Reduction::Girard),
            Self::Pca => Some(Reduction::Pca),
        }
    }
}

/// JSON checkpoint of an [`EstimatorState`]; matrices are stored row-wise.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EstimatorSnapshot {
    pub center: Vec<Vec<f64>>,
    pub generators: Vec<Vec<Vec<f64>>>,
    pub covariance: Vec<Vec<f64>>,
    pub lambda: f64,
    pub step: usize,
    pub noise: NoiseStructure,
    pub drift: DriftStructure,
    pub reduction_order: Option<usize>,
    #[serde(default)]
    pub reduction_method: ParameterReduction,
}

/// Least-squares warm start `C₀ = Φ† Y` from stacked regressor and output rows.
pub fn warm_start_center(phi: &DMatrix<f64>, y: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    check_dim("warm start rows", phi.nrows(), y.nrows())?;
    let svd = phi.clone().svd(true, true);
    let rank = svd.rank(1e-12 * svd.singular_values.max().max(1.0));
    if rank < phi.ncols() {
        return Err(Error::RankDeficient(format!(
            "warm-start regressors have rank {rank}, need {}",
            phi.ncols()
        )));
    }
    let pinv = svd
        .pseudo_inverse(1e-14)
        .map_err(|e| Error::Singular(e.to_string()))?;
    Ok(pinv * y)
}

/// Persistent-excitation bounds over every window of `s` consecutive regressors.
///
/// Returns `(α, β)`: the smallest and largest eigenvalue of `Σ φᵢᵀφᵢ` across
/// windows. The sequence is persistently exciting iff `α > 0`.
pub fn pe_check(regressors: &[DMatrix<f64>], s: usize) -> Result<(f64, f64)> {
    if regressors.is_empty() {
        return Err(Error::InvalidArgument("no regressors".into()));
    }
    if s == 0 || regressors.len() < s {
        return Err(Error::InvalidArgument(format!(
            "window length {s} invalid for {} regressors",
            regressors.len()
        )));
    }
    let n = regressors[0].ncols();
    let grams: Vec<DMatrix<f64>> = regressors
        .iter()
        .map(|phi| {
            check_dim("regressor columns", n, phi.ncols())?;
            Ok(phi.transpose() * phi)
        })
        .collect::<Result<_>>()?;
    let mut alpha = f64::INFINITY;
    let mut beta: f64 = 0.0;
    let mut window: DMatrix<f64> = grams[..s].iter().fold(DMatrix::zeros(n, n), |acc, g| acc + g);
    for j in 0..=(grams.len() - s) {
        if j > 0 {
            window += &grams[j + s - 1];
            window -= &grams[j - 1];
        }
        let eig = window.clone().symmetric_eigen().eigenvalues;
        alpha = alpha.min(eig.min().max(0.0));
        beta = beta.max(eig.max());
    }
    Ok((alpha, beta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{dmatrix, dvector};

    fn small_state(lambda: f64) -> EstimatorState {
        let noise = NoiseStructure::new(1, 2, 0.1).unwrap();
        let drift = DriftStructure::new(2, 2, 0.0).unwrap();
        EstimatorState::with_defaults(noise, drift, lambda, 100.0, 1.5, None).unwrap()
    }

    #[test]
    fn q_matrix_is_scaled_identity() {
        let noise = NoiseStructure::new(3, 4, 0.5).unwrap();
        assert_eq!(noise.basis().len(), 12);
        assert_eq!(noise.q_matrix(), DMatrix::identity(3, 3) * (4.0 * 0.25));
    }

    #[test]
    fn noise_basis_covers_each_entry_once() {
        let noise = NoiseStructure::new(2, 3, 0.2).unwrap();
        let mut cover = DMatrix::<f64>::zeros(2, 3);
        for b in noise.basis() {
            assert_eq!(b.iter().filter(|v| **v != 0.0).count(), 1);
            cover += b;
        }
        assert_eq!(cover, DMatrix::from_element(2, 3, 0.2));
    }

    #[test]
    fn scalar_gain() {
        let (k, l) = optimal_gain(&dmatrix![1.0], &dmatrix![1.0], 1.0, &dmatrix![1.0]).unwrap();
        assert_eq!(k[(0, 0)], 0.5);
        assert_eq!(l[(0, 0)], 2.0);
    }

    #[test]
    fn zero_regressor_gain() {
        let (k, _) = optimal_gain(&DMatrix::identity(3, 3), &DMatrix::zeros(1, 3), 0.9, &dmatrix![0.1]).unwrap();
        assert!(k.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn singular_innovation() {
        let r = optimal_gain(&DMatrix::identity(2, 2), &DMatrix::zeros(1, 2), 1.0, &dmatrix![0.0]);
        assert!(matches!(r, Err(Error::Singular(_))));
    }

    #[test]
    fn zero_information_step() {
        let s = small_state(0.9);
        let next = s.update(&DMatrix::zeros(1, 2), &dmatrix![3.0, 4.0]).unwrap();
        assert_eq!(next.center(), s.center());
        assert!((next.covariance() - s.covariance() / 0.9).amax() < 1e-9);
        assert_eq!(next.generators().len(), s.generators().len());
        for (a, b) in next.generators().iter().zip(s.generators()) {
            assert!((a - b / 0.9f64.sqrt()).amax() < 1e-12);
        }
        assert_eq!(next.step(), 1);
    }

    #[test]
    fn init_rejects_bad_inputs() {
        let noise = NoiseStructure::new(1, 2, 0.1).unwrap();
        let drift = DriftStructure::new(2, 2, 0.0).unwrap();
        let c = DMatrix::zeros(2, 2);
        let p = DMatrix::identity(2, 2);
        let full = single_entry_basis(2, 2, 1.0);
        assert!(EstimatorState::init(c.clone(), full[..3].to_vec(), p.clone(), 0.9, noise, drift, None).is_err());
        assert!(EstimatorState::init(c.clone(), full.clone(), -p.clone(), 0.9, noise, drift, None).is_err());
        assert!(EstimatorState::init(c.clone(), full.clone(), p.clone(), 1.2, noise, drift, None).is_err());
        assert!(EstimatorState::init(c.clone(), full.clone(), p.clone(), 0.0, noise, drift, None).is_err());
        assert!(EstimatorState::init(c, full, p, 1.0, noise, drift, Some(3)).is_err());
    }

    #[test]
    fn default_init_matches_settings() {
        let s = small_state(1.0);
        assert_eq!(s.model_set(false).num_generators(), 4);
        assert_eq!(s.covariance(), &(DMatrix::identity(2, 2) * 100.0));
        assert!(s.center().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn update_rejects_nonfinite() {
        let s = small_state(1.0);
        assert!(matches!(
            s.update(&dmatrix![f64::NAN, 1.0], &dmatrix![0.0, 0.0]),
            Err(Error::NonFinite(_))
        ));
        assert!(s.update(&dmatrix![1.0, 1.0, 1.0], &dmatrix![0.0, 0.0]).is_err());
    }

    #[test]
    fn warm_start_recovers_exact_parameters() {
        let theta = dmatrix![1.0, -2.0; 0.5, 3.0];
        let phi = dmatrix![1.0, 0.0; 0.0, 1.0; 1.0, 1.0];
        let y = &phi * &theta;
        let c0 = warm_start_center(&phi, &y).unwrap();
        assert!((c0 - theta).amax() < 1e-12);
        assert!(warm_start_center(&dmatrix![1.0, 1.0; 2.0, 2.0], &dmatrix![1.0; 2.0]).is_err());
    }

    #[test]
    fn pe_examples() {
        let constant = vec![dmatrix![1.0, 0.0]; 5];
        assert_eq!(pe_check(&constant, 2).unwrap().0, 0.0);

        let alternating: Vec<_> = (0..6)
            .map(|i| if i % 2 == 0 { dmatrix![1.0, 0.0] } else { dmatrix![0.0, 1.0] })
            .collect();
        assert_eq!(pe_check(&alternating, 2).unwrap(), (1.0, 1.0));
        assert!(pe_check(&[], 1).is_err());
        assert!(pe_check(&constant, 6).is_err());
    }

    #[test]
    fn regression_lift() {
        let x = dvector![1.0, 2.0];
        let u = dvector![3.0];
        assert_eq!(Regression::Linear.regressor(&x, &u), dmatrix![1.0, 2.0, 3.0]);
        assert_eq!(Regression::Affine.regressor(&x, &u), dmatrix![1.0, 1.0, 2.0, 3.0]);
        assert_eq!(Regression::Affine.regressor_len(2, 1), 4);
    }

    #[test]
    fn snapshot_roundtrip() {
        let s = small_state(0.95)
            .update(&dmatrix![1.0, -0.5], &dmatrix![0.3, 0.1])
            .unwrap();
        let json = serde_json::to_string(&s.to_snapshot()).unwrap();
        let back = EstimatorState::from_snapshot(&serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(back, s);
    }
}
