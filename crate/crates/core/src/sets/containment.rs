//! Point containment in zonotopes as a linear feasibility problem.
//!
//! `x ∈ ⟨c, G⟩` holds iff some `β` with `‖β‖_∞ ≤ 1` solves `G β = x − c`.
//! Two cheap screens run before the LP: points outside the interval hull are
//! rejected, and a minimum-norm solution with small enough entries is accepted
//! as a witness.

use clarabel::algebra::CscMatrix;
use clarabel::solver::{
    DefaultSettingsBuilder, DefaultSolver, IPSolver, NonnegativeConeT, SolverStatus, ZeroConeT,
};
use nalgebra::{DMatrix, DVector};

use super::zonotope::Zonotope;
use crate::error::{check_dim, Error, Result};

/// Default slack on the `‖β‖_∞ ≤ 1` bound.
pub const DEFAULT_TOL: f64 = 1e-7;

/// Relative tolerance used for the equality residual.
const EQ_RTOL: f64 = 1e-9;

/// Returns whether `x` lies in `z` with factors bounded by `1 + tol`.
pub fn contains_point(z: &Zonotope, x: &DVector<f64>, tol: f64) -> Result<bool> {
    check_dim("containment point", z.dim(), x.len())?;
    if !(tol >= 0.0) {
        return Err(Error::InvalidArgument("tolerance must be nonnegative".into()));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Ok(false);
    }
    let d = x - z.center();
    let g = z.generators();
    let radius = z.hull_radius();
    let bound = 1.0 + tol;

    for i in 0..d.len() {
        let scale = radius[i].max(d[i].abs()).max(f64::MIN_POSITIVE);
        if d[i].abs() > radius[i] * bound + EQ_RTOL * scale {
            return Ok(false);
        }
    }
    if g.ncols() == 0 {
        return Ok(true);
    }
    if let Some(beta) = min_norm_witness(g, &d) {
        if beta.amax() <= bound {
            return Ok(true);
        }
    }
    feasible_with_bound(g, &d, bound)
}

/// Smallest `‖β‖_∞` with `c + G β = x`, or `None` when `x` is off the affine hull.
///
/// Solved with an interior-point method, so the value is accurate to roughly `1e-8`.
pub fn min_factor_norm(z: &Zonotope, x: &DVector<f64>) -> Result<Option<f64>> {
    check_dim("containment point", z.dim(), x.len())?;
    let d = x - z.center();
    let g = z.generators();
    if g.ncols() == 0 {
        let scale = x.amax().max(z.center().amax()).max(1.0);
        return Ok((d.amax() <= EQ_RTOL * scale).then_some(0.0));
    }
    Ok(min_inf_norm(g, &d)?.map(|(t, _)| t))
}

/// `min t  s.t.  G β = d, −t ≤ β ≤ t`, returning `t` and the minimizer.
fn min_inf_norm(g: &DMatrix<f64>, d: &DVector<f64>) -> Result<Option<(f64, DVector<f64>)>> {
    let (n, q) = g.shape();
    // equality rows scaled to unit max entry; zero rows must have zero target
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let row_max = g.row(i).amax();
        if row_max == 0.0 {
            if d[i].abs() > EQ_RTOL * d.amax().max(1.0) {
                return Ok(None);
            }
        } else {
            rows.push((i, 1.0 / row_max));
        }
    }
    let ne = rows.len();

    // variables [β; t]; constraint rows [equalities; β − t ≤ 0; −β − t ≤ 0]
    let m = ne + 2 * q;
    let (mut colptr, mut rowval, mut nzval) = (vec![0], Vec::new(), Vec::new());
    for j in 0..q {
        for (r, &(i, s)) in rows.iter().enumerate() {
            if g[(i, j)] != 0.0 {
                rowval.push(r);
                nzval.push(g[(i, j)] * s);
            }
        }
        rowval.extend([ne + j, ne + q + j]);
        nzval.extend([1.0, -1.0]);
        colptr.push(rowval.len());
    }
    rowval.extend(ne..m);
    nzval.extend(std::iter::repeat_n(-1.0, 2 * q));
    colptr.push(rowval.len());
    let a = CscMatrix::new(m, q + 1, colptr, rowval, nzval);

    let mut b = vec![0.0; m];
    for (r, &(i, s)) in rows.iter().enumerate() {
        b[r] = d[i] * s;
    }
    let mut c = vec![0.0; q + 1];
    c[q] = 1.0;
    let p = CscMatrix::zeros((q + 1, q + 1));
    let cones = [ZeroConeT(ne), NonnegativeConeT(2 * q)];
    let settings = DefaultSettingsBuilder::default()
        .verbose(false)
        .max_iter(200)
        .build()
        .map_err(|e| Error::Lp(format!("{e:?}")))?;
    let mut solver = DefaultSolver::new(&p, &c, &a, &b, &cones, settings)
        .map_err(|e| Error::Lp(format!("{e:?}")))?;
    solver.solve();
    match solver.solution.status {
        SolverStatus::Solved | SolverStatus::AlmostSolved => {
            let x = &solver.solution.x;
            Ok(Some((x[q], DVector::from_column_slice(&x[..q]))))
        }
        SolverStatus::PrimalInfeasible | SolverStatus::AlmostPrimalInfeasible => Ok(None),
        other => Err(Error::Lp(format!("interior-point solver stopped with {other:?}"))),
    }
}

fn feasible_with_bound(g: &DMatrix<f64>, d: &DVector<f64>, bound: f64) -> Result<bool> {
    let Some((t, beta)) = min_inf_norm(g, d)? else {
        return Ok(false);
    };
    // accept a verified witness, otherwise trust the optimal value
    let residual = (g * &beta - d).amax();
    if beta.amax() <= bound && residual <= EQ_RTOL * d.amax().max(g.amax()) {
        return Ok(true);
    }
    Ok(t <= bound)
}

fn min_norm_witness(g: &DMatrix<f64>, d: &DVector<f64>) -> Option<DVector<f64>> {
    let svd = g.clone().svd(true, true);
    let smax = svd.singular_values.max();
    if smax == 0.0 {
        return None;
    }
    let eps = smax * 1e-12 * (g.nrows().max(g.ncols()) as f64);
    let beta = svd.solve(d, eps).ok()?;
    let residual = (g * &beta - d).amax();
    let scale = d.amax().max(g.amax());
    (residual <= EQ_RTOL * scale).then_some(beta)
}
