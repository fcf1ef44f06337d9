#![allow(dead_code)]

use std::path::PathBuf;
use std::time::{Duration, Instant};

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use zonoreach::estimator::{optimal_gain, DriftStructure, EstimatorState, NoiseStructure};
use zonoreach::harness::SlidingWindow;
use zonoreach::reach::{covering_radius, lipschitz_estimate, reach_ltv_from_model, LtvReachConfig};
use zonoreach::scenario::{self, Mode, RunOutput, RunValidation, ScenarioConfig};
use zonoreach::sets::{contains_point, MatrixZonotope, Reduction, Zonotope, DEFAULT_TOL};

/// Outcome of one acceptance check.
#[derive(Debug)]
pub struct Check {
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(passed: bool, detail: String) -> Self {
        Self { passed, detail }
    }
}

pub fn config_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs").join(name)
}

pub fn load_config(name: &str) -> ScenarioConfig {
    ScenarioConfig::load(&config_path(name)).expect("bundled config")
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize, scale: f64) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.random_range(-scale..scale))
}

pub fn random_zonotope(rng: &mut impl Rng, dim: usize, gens: usize) -> Zonotope {
    Zonotope::new(
        DVector::from_fn(dim, |_, _| rng.random_range(-5.0..5.0)),
        random_matrix(rng, dim, gens, 2.0),
    )
    .unwrap()
}

pub fn random_matzono(rng: &mut impl Rng, rows: usize, cols: usize, gens: usize) -> MatrixZonotope {
    MatrixZonotope::new(
        random_matrix(rng, rows, cols, 2.0),
        (0..gens).map(|_| random_matrix(rng, rows, cols, 1.0)).collect(),
    )
    .unwrap()
}

/// Uniform factor draw, or a vertex every other call.
fn sample_point(z: &Zonotope, rng: &mut impl Rng, i: usize) -> DVector<f64> {
    if i.is_multiple_of(2) {
        z.sample_vertex(rng)
    } else {
        z.sample(rng)
    }
}

// ---- 1: estimator containment -------------------------------------------

pub struct ContainmentStats {
    pub checks: usize,
    pub violations: usize,
    pub elapsed: Duration,
}

/// Synthetic `y = φ θ_k + v` with entrywise drift on θ; counts steps after the
/// first where the updated set misses the θ that produced `y`.
pub fn estimator_containment(runs: u64, steps: usize, lambda: f64, sigma_theta: f64) -> ContainmentStats {
    let (n, m, sigma_v) = (6, 5, 0.005);
    let t0 = Instant::now();
    let (mut checks, mut violations) = (0, 0);
    for run in 0..runs {
        let mut rng = ChaCha8Rng::seed_from_u64(run);
        let noise = NoiseStructure::new(1, m, sigma_v).unwrap();
        let drift = DriftStructure::new(n, m, sigma_theta).unwrap();
        let mut est = EstimatorState::with_defaults(noise, drift, lambda, 1e7, 1.5, Some(2 * n * m)).unwrap();
        let mut theta = random_matrix(&mut rng, n, m, 1.0);
        for k in 0..steps {
            let phi = random_matrix(&mut rng, 1, n, 1.7);
            let v = DMatrix::from_fn(1, m, |_, _| rng.random_range(-sigma_v..=sigma_v));
            est = est.update(&phi, &(&phi * &theta + v)).unwrap();
            if k >= 1 {
                checks += 1;
                let z = est.model_set(false).vectorize();
                if !contains_point(&z, &DVector::from_column_slice(theta.as_slice()), DEFAULT_TOL).unwrap() {
                    violations += 1;
                }
            }
            theta += DMatrix::from_fn(n, m, |_, _| rng.random_range(-sigma_theta..=sigma_theta));
        }
    }
    ContainmentStats { checks, violations, elapsed: t0.elapsed() }
}

pub fn criterion_estimator() -> Check {
    let s = estimator_containment(50, 500, 0.92, 3e-4);
    Check::new(
        s.violations == 0 && s.elapsed < Duration::from_secs(30),
        format!("{} of {} checks missed, {:.1} s", s.violations, s.checks, s.elapsed.as_secs_f64()),
    )
}

// ---- 2: gain optimality --------------------------------------------------

/// `Tr(W P⁺(K))` with `P⁺(K) = λ⁻¹(I − Kφ)P(I − Kφ)ᵀ + K Q Kᵀ`.
pub fn gain_cost(k: &DMatrix<f64>, p: &DMatrix<f64>, phi: &DMatrix<f64>, lambda: f64, q: &DMatrix<f64>, w: &DMatrix<f64>) -> f64 {
    let n = p.nrows();
    let a = DMatrix::identity(n, n) - k * phi;
    let next = &a * p * a.transpose() / lambda + k * q * k.transpose();
    (w * next).trace()
}

/// Minimizes the cost by sampling it: the cost is quadratic in `vec K`, so
/// second differences give the Hessian and central differences the gradient;
/// a Newton step from zero followed by one refinement step lands on the minimizer.
pub fn numeric_gain(p: &DMatrix<f64>, phi: &DMatrix<f64>, lambda: f64, q: &DMatrix<f64>, w: &DMatrix<f64>) -> DMatrix<f64> {
    let (n, pp) = (p.nrows(), phi.nrows());
    let dim = n * pp;
    let cost = |v: &DVector<f64>| gain_cost(&DMatrix::from_column_slice(n, pp, v.as_slice()), p, phi, lambda, q, w);
    let unit = |i: usize| {
        let mut e = DVector::zeros(dim);
        e[i] = 1.0;
        e
    };
    let zero = DVector::zeros(dim);
    let f0 = cost(&zero);
    let fi: Vec<f64> = (0..dim).map(|i| cost(&unit(i))).collect();
    let mut hess = DMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in i..dim {
            // f(e_i + e_j) − f(e_i) − f(e_j) + f(0) = H_ij, diagonal included
            let h = cost(&(unit(i) + unit(j))) - fi[i] - fi[j] + f0;
            hess[(i, j)] = h;
            hess[(j, i)] = h;
        }
    }
    let chol = hess.cholesky().expect("cost is strictly convex");
    let grad = |x: &DVector<f64>| DVector::from_fn(dim, |i, _| (cost(&(x + unit(i))) - cost(&(x - unit(i)))) / 2.0);
    let mut x = -chol.solve(&grad(&zero));
    x -= chol.solve(&grad(&x));
    DMatrix::from_column_slice(n, pp, x.as_slice())
}

fn random_psd(rng: &mut impl Rng, n: usize, floor: f64) -> DMatrix<f64> {
    let a = random_matrix(rng, n, n, 1.0);
    &a * a.transpose() + DMatrix::identity(n, n) * floor
}

/// Largest `‖K* − K_numeric‖_F` over `instances × 3` random weightings.
pub fn gain_oracle(instances: u64) -> f64 {
    let mut worst: f64 = 0.0;
    for seed in 0..instances {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        let n = rng.random_range(2..8);
        let p_rows = rng.random_range(1..4);
        let m = rng.random_range(1..6);
        let p = random_psd(&mut rng, n, 0.1);
        let phi = random_matrix(&mut rng, p_rows, n, 1.0);
        let lambda = rng.random_range(0.9..=1.0);
        let q = NoiseStructure::new(p_rows, m, rng.random_range(0.01..0.5)).unwrap().q_matrix();
        let (k, _) = optimal_gain(&p, &phi, lambda, &q).unwrap();
        for _ in 0..3 {
            let w = random_psd(&mut rng, n, 0.05);
            worst = worst.max((&k - numeric_gain(&p, &phi, lambda, &q, &w)).norm());
        }
    }
    worst
}

/// `Σ Q_v Q_vᵀ = m σ² I`, bit for bit when `σ²` sums without rounding.
pub fn q_structure_exact() -> bool {
    (1..5).all(|p| {
        (1..7).all(|m| {
            [0.5, 0.25, 0.125, 3.0 / 64.0, 1.0].iter().all(|&s| {
                let q = NoiseStructure::new(p, m, s).unwrap().q_matrix();
                q == DMatrix::identity(p, p) * (m as f64 * s * s)
            })
        })
    })
}

pub fn criterion_gain() -> Check {
    let worst = gain_oracle(100);
    let q_ok = q_structure_exact();
    Check::new(
        worst <= 1e-5 && q_ok,
        format!("max ‖ΔK‖_F = {worst:.2e}, Q structure exact: {q_ok}"),
    )
}

// ---- 3: degenerate exactness ---------------------------------------------

/// Largest interval-hull gap between the linear propagation and a point model.
pub fn degenerate_gap(seed: u64, steps: usize) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (nx, nu) = (rng.random_range(1..6), rng.random_range(1..3));
    let a = random_matrix(&mut rng, nx, nx, 1.0);
    // keep the propagation bounded
    let a = &a / (a.clone().svd(false, false).singular_values.max() * 1.05);
    let b = random_matrix(&mut rng, nx, nu, 1.0);
    let mut ab = DMatrix::zeros(nx, nx + nu);
    ab.columns_mut(0, nx).copy_from(&a);
    ab.columns_mut(nx, nu).copy_from(&b);
    let x0 = random_zonotope(&mut rng, nx, nx);
    let u = random_zonotope(&mut rng, nu, nu);
    let cfg = LtvReachConfig::new(steps, 0.0, u.clone(), Zonotope::point(DVector::zeros(nx)), x0.clone(), 10_000);
    let r = reach_ltv_from_model(&MatrixZonotope::point(ab), 0.0, &cfg).unwrap();
    let bu = u.linear_map(&b).unwrap();
    let mut oracle = x0;
    let mut gap: f64 = 0.0;
    for k in 1..=steps {
        oracle = oracle.linear_map(&a).unwrap().minkowski_sum(&bu).unwrap();
        let (h, o) = (r.sets[k].interval_hull(), oracle.interval_hull());
        gap = gap.max((h.lower() - o.lower()).amax()).max((h.upper() - o.upper()).amax());
    }
    gap
}

pub fn criterion_degenerate() -> Check {
    let gap = (0..20).map(|s| degenerate_gap(s, 20)).fold(0.0, f64::max);
    Check::new(gap <= 1e-9, format!("max hull gap {gap:.2e} over 20 systems × 20 steps"))
}

// ---- 4-6, 9: scenarios ---------------------------------------------------

pub fn run_scenario(cfg: &ScenarioConfig, seed: u64) -> (RunOutput, RunValidation) {
    let mode = cfg.mode.unwrap_or(Mode::Ltv);
    let out = scenario::run(cfg, mode, seed, None, None).expect("scenario run");
    let triggers: Vec<_> = out
        .triggers
        .iter()
        .map(|t| (t.time, t.reach.clone(), t.baseline.clone()))
        .collect();
    let (report, _) = scenario::validate_triggers(cfg, &triggers, cfg.validation.trajectories, seed).expect("validation");
    (out, report)
}

fn checks(v: &RunValidation) -> usize {
    v.triggers.iter().map(|t| t.report.containment_checks).sum()
}

pub fn criterion_ltv() -> Check {
    let t0 = Instant::now();
    let mut parts = Vec::new();
    let mut ok = true;
    for name in ["example1_static.json", "example1_drift.json"] {
        let cfg = load_config(name);
        let (_, v) = run_scenario(&cfg, cfg.validation.seed);
        ok &= v.violations == 0;
        parts.push(format!("{name}: {}/{} missed", v.violations, checks(&v)));
    }
    let secs = t0.elapsed().as_secs_f64();
    Check::new(ok && secs < 120.0, format!("{}, {secs:.1} s", parts.join(", ")))
}

pub fn criterion_drift_comparison() -> Check {
    let cfg = load_config("example1_drift.json");
    let (_, v) = run_scenario(&cfg, cfg.validation.seed);
    Check::new(
        v.violations == 0 && v.baseline_violations >= 1,
        format!("forgetting estimator {} missed, batch LS {} missed of {}", v.violations, v.baseline_violations, checks(&v)),
    )
}

pub fn criterion_cstr() -> Check {
    let t0 = Instant::now();
    let cfg = load_config("cstr.json");
    let (_, v) = run_scenario(&cfg, cfg.validation.seed);
    let mut worst_ratio: f64 = 0.0;
    let mut tighter = true;
    for t in &v.triggers {
        let base = t.baseline.as_ref().expect("baseline enabled");
        let pairs = t.report.per_step_set_radius.iter().zip(&base.per_step_set_radius);
        for (k, (ef, ls)) in pairs.enumerate() {
            tighter &= ef <= ls;
            // step 0 is X_0 for both
            if k > 0 {
                worst_ratio = worst_ratio.max(ef / ls);
            }
        }
    }
    let secs = t0.elapsed().as_secs_f64();
    Check::new(
        v.violations == 0 && tighter && secs < 120.0,
        format!(
            "{}/{} missed, max EF/LS radius ratio {worst_ratio:.3}, {secs:.1} s",
            v.violations,
            checks(&v)
        ),
    )
}

pub const BUNDLED: [&str; 3] = ["example1_static.json", "example1_drift.json", "cstr.json"];

pub fn criterion_determinism() -> Check {
    let mut same = true;
    for name in BUNDLED {
        let cfg = load_config(name);
        let (_, a) = run_scenario(&cfg, 7);
        let (_, b) = run_scenario(&cfg, 7);
        same &= serde_json::to_string(&a).unwrap() == serde_json::to_string(&b).unwrap();
    }
    Check::new(same, format!("{} bundled scenarios, seed 7, reports identical: {same}", BUNDLED.len()))
}

// ---- 7: set algebra ------------------------------------------------------

/// Failures of one randomized set-algebra case, by operation index 0..5.
pub fn set_algebra_case(seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let op = seed % 5;
    let n = rng.random_range(1..5);
    let gens = rng.random_range(0..8);
    let z = random_zonotope(&mut rng, n, gens);
    let samples = 8;
    let fail = |what: &str, x: &DVector<f64>| Err(format!("seed {seed}: {what} misses {x}"));
    match op {
        0 => {
            let rows = rng.random_range(1..5);
            let l = random_matrix(&mut rng, rows, n, 2.0);
            let out = z.linear_map(&l).unwrap();
            for i in 0..samples {
                let y = &l * sample_point(&z, &mut rng, i);
                if !contains_point(&out, &y, DEFAULT_TOL).unwrap() {
                    return fail("linear_map", &y);
                }
            }
        }
        1 => {
            let other_gens = rng.random_range(0..6);
            let other = random_zonotope(&mut rng, n, other_gens);
            let out = z.minkowski_sum(&other).unwrap();
            for i in 0..samples {
                let y = sample_point(&z, &mut rng, i) + sample_point(&other, &mut rng, i + 1);
                if !contains_point(&out, &y, DEFAULT_TOL).unwrap() {
                    return fail("minkowski_sum", &y);
                }
            }
        }
        2 => {
            let (dim, gens) = (rng.random_range(1..4), rng.random_range(0..5));
            let other = random_zonotope(&mut rng, dim, gens);
            let out = z.cartesian_product(&other);
            let top = DMatrix::identity(out.dim(), out.dim()).rows(0, n).into_owned();
            if out.linear_map(&top).unwrap().interval_hull() != z.interval_hull() {
                return Err(format!("seed {seed}: projection of cartesian_product differs"));
            }
            for i in 0..samples {
                let (a, b) = (sample_point(&z, &mut rng, i), sample_point(&other, &mut rng, i + 1));
                let y = DVector::from_iterator(out.dim(), a.iter().chain(b.iter()).copied());
                if !contains_point(&out, &y, DEFAULT_TOL).unwrap() {
                    return fail("cartesian_product", &y);
                }
            }
        }
        3 => {
            let big_gens = rng.random_range(n..4 * n + 6);
            let big = random_zonotope(&mut rng, n, big_gens);
            let q = rng.random_range(n..=big.num_generators().max(n));
            let method = [Reduction::NormBox, Reduction::Girard, Reduction::Pca][rng.random_range(0..3)];
            let out = big.reduce_with(q, method).unwrap();
            if out.num_generators() > q.max(n) {
                return Err(format!("seed {seed}: reduce kept {} > {q} generators", out.num_generators()));
            }
            for i in 0..samples {
                let y = sample_point(&big, &mut rng, i);
                if !contains_point(&out, &y, DEFAULT_TOL).unwrap() {
                    return fail("reduce", &y);
                }
            }
        }
        _ => {
            let rows = rng.random_range(1..4);
            let mz_gens = rng.random_range(0..4);
            let mz = random_matzono(&mut rng, rows, n, mz_gens);
            let out = mz.times_zonotope(&z).unwrap();
            for i in 0..samples {
                let m = mz.sample(&mut rng);
                let y = m * sample_point(&z, &mut rng, i);
                if !contains_point(&out, &y, DEFAULT_TOL).unwrap() {
                    return fail("times_zonotope", &y);
                }
            }
        }
    }
    Ok(())
}

/// Exact vec/unvec round trip and the interval Frobenius bound on members.
pub fn matzono_case(seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (r, c) = (rng.random_range(1..5), rng.random_range(1..5));
    let m_gens = rng.random_range(0..6);
    let m = random_matzono(&mut rng, r, c, m_gens);
    let back = MatrixZonotope::unvectorize(&m.vectorize(), (r, c)).unwrap();
    if back != m {
        return Err(format!("seed {seed}: vec/unvec round trip changed the set"));
    }
    let bound = m.interval().frobenius();
    for _ in 0..8 {
        let member = m.sample(&mut rng);
        if member.norm() > bound * (1.0 + 1e-12) {
            return Err(format!("seed {seed}: member norm {} above bound {bound}", member.norm()));
        }
    }
    Ok(())
}

pub fn set_algebra_suite(cases: u64) -> (usize, Vec<String>) {
    let mut failures = Vec::new();
    for seed in 0..cases {
        if let Err(e) = set_algebra_case(seed) {
            failures.push(e);
        }
        if seed % 10 == 0 {
            if let Err(e) = matzono_case(seed) {
                failures.push(e);
            }
        }
    }
    (cases as usize, failures)
}

pub fn criterion_set_algebra() -> Check {
    let (n, failures) = set_algebra_suite(10_000);
    Check::new(
        failures.is_empty(),
        format!("{n} cases, {} failed{}", failures.len(), failures.first().map(|f| format!(" (first: {f})")).unwrap_or_default()),
    )
}

// ---- 8: δ̂ and L̂ oracles ---------------------------------------------------

fn distance(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    let mut s = 0.0;
    for i in 0..a.len() {
        s += (a[i] - b[i]) * (a[i] - b[i]);
    }
    s.sqrt()
}

pub fn brute_covering_radius(points: &[DVector<f64>]) -> f64 {
    let mut worst = 0.0;
    for i in 0..points.len() {
        let mut nearest = f64::INFINITY;
        for j in 0..points.len() {
            if i != j {
                let d = distance(&points[i], &points[j]);
                if d < nearest {
                    nearest = d;
                }
            }
        }
        if nearest > worst {
            worst = nearest;
        }
    }
    worst
}

pub fn brute_lipschitz(window: &SlidingWindow) -> DVector<f64> {
    let pts = window.points();
    let succ: Vec<_> = window.transitions().map(|t| t.x_next.clone()).collect();
    let nx = succ[0].len();
    let mut best = DVector::zeros(nx);
    for i in 0..pts.len() {
        for j in 0..pts.len() {
            if i == j {
                continue;
            }
            let d = distance(&pts[i], &pts[j]);
            if d < 1e-12 {
                continue;
            }
            for o in 0..nx {
                let slope = (succ[i][o] - succ[j][o]).abs() / d;
                if slope > best[o] {
                    best[o] = slope;
                }
            }
        }
    }
    best
}

pub fn random_window(seed: u64) -> SlidingWindow {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (nx, nu) = (rng.random_range(1..5), rng.random_range(1..3));
    let len = rng.random_range(2..40);
    let mut w = SlidingWindow::new(len, nx, nu).unwrap();
    let f = random_matrix(&mut rng, nx, nx + nu, 1.0);
    for _ in 0..len {
        let x = DVector::from_fn(nx, |_, _| rng.random_range(-3.0..3.0));
        let u = DVector::from_fn(nu, |_, _| rng.random_range(-1.0..1.0));
        let z = DVector::from_iterator(nx + nu, x.iter().chain(u.iter()).copied());
        let next = (&f * z).map(f64::sin);
        w.push(&x, &u, &next).unwrap();
    }
    w
}

/// Windows where δ̂ or L̂ differ from the brute-force values.
pub fn oracle_mismatches(windows: u64) -> usize {
    (0..windows)
        .filter(|&s| {
            let w = random_window(s);
            covering_radius(&w.points()).unwrap() != brute_covering_radius(&w.points())
                || lipschitz_estimate(&w).unwrap() != brute_lipschitz(&w)
        })
        .count()
}

pub fn criterion_oracles() -> Check {
    let bad = oracle_mismatches(100);
    Check::new(bad == 0, format!("{bad} of 100 windows differ from brute force"))
}
