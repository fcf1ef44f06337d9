//! Simulated plants: a drifting linear system and a two-state exothermic CSTR.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::sets::Zonotope;

/// A matrix given either as explicit rows or as one value for every entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixSpec {
    Fill(f64),
    Rows(Vec<Vec<f64>>),
}

impl MatrixSpec {
    pub fn resolve(&self, rows: usize, cols: usize) -> Result<DMatrix<f64>> {
        match self {
            MatrixSpec::Fill(v) => Ok(DMatrix::from_element(rows, cols, *v)),
            MatrixSpec::Rows(r) => {
                let m = crate::sets::json::rows_to_matrix(r)?;
                if m.shape() != (rows, cols) {
                    return Err(Error::InvalidArgument(format!(
                        "matrix is {:?}, expected ({rows}, {cols})",
                        m.shape()
                    )));
                }
                Ok(m)
            }
        }
    }
}

/// Per-step change of `[A B]`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum DriftSpec {
    #[default]
    None,
    /// `A_k = A_0 + k δA`, `B_k = B_0 + k δB`.
    Constant { delta_a: MatrixSpec, delta_b: MatrixSpec },
    /// Entrywise increments drawn uniformly from `[-sigma, sigma]`, reproducible from `seed`.
    Random { sigma: f64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LtvPlantSpec {
    pub a: Vec<Vec<f64>>,
    pub b: Vec<Vec<f64>>,
    /// When set, `a`/`b` are continuous-time and are discretized with a
    /// zero-order hold of this step.
    #[serde(default)]
    pub sample_time: Option<f64>,
    #[serde(default)]
    pub drift: DriftSpec,
}

/// Exothermic CSTR with state `(C_a, T)` and inputs `(feed rate, cooling)`:
///
/// ```text
/// r      = k0 exp(−E / T) C_a
/// dC_a/dt = u1 C_af − C_a − r
/// dT/dt   = T_f − T + h r + c u2
/// ```
///
/// stepped with forward Euler.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CstrParams {
    pub k0: f64,
    pub activation: f64,
    pub feed_concentration: f64,
    pub feed_temperature: f64,
    pub heat_of_reaction: f64,
    pub cooling_gain: f64,
    pub dt: f64,
}

impl Default for CstrParams {
    fn default() -> Self {
        // equilibrium near (1.35, 10.9) at u = (1.1, −1.3)
        Self {
            k0: 1.0,
            activation: 10.0,
            feed_concentration: 1.718,
            feed_temperature: 11.12,
            heat_of_reaction: 2.0,
            cooling_gain: 1.0,
            dt: 0.1,
        }
    }
}

impl CstrParams {
    pub fn step(&self, x: &DVector<f64>, u: &DVector<f64>) -> DVector<f64> {
        let (ca, t) = (x[0], x[1]);
        let r = self.k0 * (-self.activation / t).exp() * ca;
        let dca = u[0] * self.feed_concentration - ca - r;
        let dt = self.feed_temperature - t + self.heat_of_reaction * r + self.cooling_gain * u[1];
        DVector::from_vec(vec![ca + self.dt * dca, t + self.dt * dt])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PlantSpec {
    Ltv(LtvPlantSpec),
    Cstr(CstrParams),
}

/// How noise is drawn from its zonotope.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseSampling {
    /// Factors uniform on `[-1, 1]`.
    #[default]
    Uniform,
    /// Factors uniform on `{-1, 1}`.
    Vertex,
}

#[derive(Debug, Clone)]
enum Dynamics {
    Ltv {
        a0: DMatrix<f64>,
        b0: DMatrix<f64>,
        drift: Drift,
    },
    Cstr(CstrParams),
}

#[derive(Debug, Clone)]
enum Drift {
    None,
    Constant(DMatrix<f64>, DMatrix<f64>),
    Random(f64, u64),
}

/// A plant ready to simulate: dynamics plus additive process noise `Z_w`.
#[derive(Debug, Clone)]
pub struct Plant {
    dynamics: Dynamics,
    noise: Zonotope,
    sampling: NoiseSampling,
    nx: usize,
    nu: usize,
}

impl Plant {
    pub fn new(spec: &PlantSpec, noise: Zonotope) -> Result<Self> {
        let (dynamics, nx, nu) = match spec {
            PlantSpec::Ltv(s) => {
                let a = crate::sets::json::rows_to_matrix(&s.a)?;
                let b = crate::sets::json::rows_to_matrix(&s.b)?;
                let (nx, nu) = (a.nrows(), b.ncols());
                check_dim("plant A columns", nx, a.ncols())?;
                check_dim("plant B rows", nx, b.nrows())?;
                let (a0, b0) = match s.sample_time {
                    Some(dt) => discretize(&a, &b, dt)?,
                    None => (a, b),
                };
                let drift = match &s.drift {
                    DriftSpec::None => Drift::None,
                    DriftSpec::Constant { delta_a, delta_b } => {
                        Drift::Constant(delta_a.resolve(nx, nx)?, delta_b.resolve(nx, nu)?)
                    }
                    DriftSpec::Random { sigma, seed } => {
                        if !(*sigma >= 0.0) {
                            return Err(Error::InvalidArgument("drift sigma must be >= 0".into()));
                        }
                        Drift::Random(*sigma, *seed)
                    }
                };
                (Dynamics::Ltv { a0, b0, drift }, nx, nu)
            }
            PlantSpec::Cstr(p) => {
                if !(p.dt > 0.0) {
                    return Err(Error::InvalidArgument("CSTR step must be positive".into()));
                }
                (Dynamics::Cstr(*p), 2, 2)
            }
        };
        check_dim("plant noise set", nx, noise.dim())?;
        Ok(Self {
            dynamics,
            noise,
            sampling: NoiseSampling::Uniform,
            nx,
            nu,
        })
    }

    pub fn with_sampling(mut self, sampling: NoiseSampling) -> Self {
        self.sampling = sampling;
        self
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.nx, self.nu)
    }

    pub fn noise_set(&self) -> &Zonotope {
        &self.noise
    }

    /// `[A_k B_k]` of a linear plant; `None` for nonlinear plants.
    pub fn ltv_model(&self, k: usize) -> Option<(DMatrix<f64>, DMatrix<f64>)> {
        let Dynamics::Ltv { a0, b0, drift } = &self.dynamics else {
            return None;
        };
        let (mut a, mut b) = (a0.clone(), b0.clone());
        match drift {
            Drift::None => {}
            Drift::Constant(da, db) => {
                a += da * k as f64;
                b += db * k as f64;
            }
            Drift::Random(sigma, seed) => {
                if *sigma > 0.0 {
                    for step in 0..k {
                        let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                        rng.set_stream(step as u64);
                        a.iter_mut().chain(b.iter_mut()).for_each(|v| *v += rng.random_range(-*sigma..=*sigma));
                    }
                }
            }
        }
        Some((a, b))
    }

    /// Largest per-step entry change of `[A B]`, zero for nonlinear plants.
    pub fn drift_bound(&self) -> f64 {
        match &self.dynamics {
            Dynamics::Ltv { drift: Drift::Constant(da, db), .. } => da.amax().max(db.amax()),
            Dynamics::Ltv { drift: Drift::Random(s, _), .. } => *s,
            _ => 0.0,
        }
    }

    /// Noise-free successor `f_k(x, u)`.
    pub fn step(&self, k: usize, x: &DVector<f64>, u: &DVector<f64>) -> DVector<f64> {
        match &self.dynamics {
            Dynamics::Ltv { .. } => {
                let (a, b) = self.ltv_model(k).expect("linear plant");
                a * x + b * u
            }
            Dynamics::Cstr(p) => p.step(x, u),
        }
    }

    pub fn sample_noise<R: Rng + ?Sized>(&self, rng: &mut R) -> DVector<f64> {
        match self.sampling {
            NoiseSampling::Uniform => self.noise.sample(rng),
            NoiseSampling::Vertex => self.noise.sample_vertex(rng),
        }
    }
}

/// A simulated or recorded run. `states` has one more entry than `inputs`
/// unless the run diverged.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trajectory {
    pub states: Vec<DVector<f64>>,
    pub inputs: Vec<DVector<f64>>,
    pub noises: Vec<DVector<f64>>,
    pub diverged: bool,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.inputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty()
    }
}

/// Simulates `x_{k+1} = f_k(x_k, u_k) + w_k` from plant time `start`.
///
/// Stops early and sets `diverged` when a state becomes non-finite.
pub fn simulate<R: Rng + ?Sized>(
    plant: &Plant,
    start: usize,
    x0: &DVector<f64>,
    inputs: &[DVector<f64>],
    rng: &mut R,
) -> Result<Trajectory> {
    check_dim("initial state", plant.nx, x0.len())?;
    let mut traj = Trajectory {
        states: vec![x0.clone()],
        ..Default::default()
    };
    for (j, u) in inputs.iter().enumerate() {
        check_dim("input", plant.nu, u.len())?;
        let w = plant.sample_noise(rng);
        let x = plant.step(start + j, traj.states.last().expect("nonempty"), u) + &w;
        traj.inputs.push(u.clone());
        traj.noises.push(w);
        if x.iter().any(|v| !v.is_finite()) {
            traj.diverged = true;
            break;
        }
        traj.states.push(x);
    }
    Ok(traj)
}

/// Zero-order-hold discretization through the exponential of `[[A, B], [0, 0]]`.
pub fn discretize(a: &DMatrix<f64>, b: &DMatrix<f64>, dt: f64) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let (n, m) = (a.nrows(), b.ncols());
    check_dim("discretize B rows", n, b.nrows())?;
    let mut aug = DMatrix::zeros(n + m, n + m);
    aug.view_mut((0, 0), (n, n)).copy_from(&(a * dt));
    aug.view_mut((0, n), (n, m)).copy_from(&(b * dt));
    let e = aug.exp();
    Ok((
        e.view((0, 0), (n, n)).into_owned(),
        e.view((0, n), (n, m)).into_owned(),
    ))
}

/// The stable five-state, one-input benchmark used by the linear examples.
pub fn five_state_benchmark() -> LtvPlantSpec {
    LtvPlantSpec {
        a: vec![
            vec![-1.0, -4.0, 0.0, 0.0, 0.0],
            vec![4.0, -1.0, 0.0, 0.0, 0.0],
            vec![0.0, 0.0, -3.0, 1.0, 0.0],
            vec![0.0, 0.0, -1.0, -3.0, 0.0],
            vec![0.0, 0.0, 0.0, 0.0, -2.0],
        ],
        b: vec![vec![1.0]; 5],
        sample_time: Some(0.1),
        drift: DriftSpec::None,
    }
}
