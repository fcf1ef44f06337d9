//! Scenario files and the streaming pipeline behind the command-line tool.
//!
//! A run feeds one trajectory (simulated, or read from CSV) through the
//! estimator step by step. From the warm-up step on, every `stride` steps it
//! computes reachable sets with the estimator's model set and with the batch
//! least-squares baseline, and writes them to the output directory.

use std::path::{Path, PathBuf};

use log::info;
use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimator::{
    target, DriftStructure, EstimatorState, NoiseStructure, ParameterReduction, Regression,
};
use crate::harness::{
    batch_ls_from_data, batch_ls_model_set, read_trajectory, simulate, write_trajectory, Plant,
    PlantSpec, SlidingWindow, Trajectory,
};
use crate::reach::{
    reach_lipschitz, reach_lipschitz_from_model, reach_ltv, reach_ltv_from_model, LipReachConfig,
    LtvReachConfig, ReachResult,
};
use crate::sets::{vertices_2d, MatrixZonotope, Zonotope};
use crate::validation::{check_trajectories, sample_trajectories, ValidationReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Ltv,
    Lipschitz,
}

impl Mode {
    pub fn regression(self) -> Regression {
        match self {
            Mode::Ltv => Regression::Linear,
            Mode::Lipschitz => Regression::Affine,
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ltv" => Ok(Mode::Ltv),
            "lipschitz" => Ok(Mode::Lipschitz),
            other => Err(Error::Config(format!("unknown mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetsConfig {
    pub initial: Zonotope,
    pub input: Zonotope,
    pub noise: Zonotope,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimatorConfig {
    pub lambda: f64,
    /// `P₀ = τ I`.
    #[serde(default = "default_tau")]
    pub tau: f64,
    /// `G₀ = {scale · E_i}`.
    #[serde(default = "default_g0")]
    pub g0_scale: f64,
    /// Defaults to twice the parameter count.
    #[serde(default)]
    pub reduction_order: Option<usize>,
    #[serde(default)]
    pub sigma_theta: f64,
    #[serde(default)]
    pub reduction: ParameterReduction,
}

fn default_tau() -> f64 {
    1e7
}

fn default_g0() -> f64 {
    1.5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReachParams {
    pub horizon: usize,
    /// Sliding window length `N_D`.
    pub window: usize,
    /// Drift bound on the model entries (`σ_AB` or `σ_M`).
    #[serde(default)]
    pub sigma: f64,
    pub reduction_order: usize,
    #[serde(default = "default_offset")]
    pub drift_offset: usize,
    #[serde(default)]
    pub delta_override: Option<f64>,
}

fn default_offset() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunParams {
    pub steps: usize,
    /// First step at which sets are computed; defaults to the window length.
    #[serde(default)]
    pub warmup: Option<usize>,
    #[serde(default = "default_stride")]
    pub stride: usize,
}

fn default_stride() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidationParams {
    #[serde(default = "default_traj")]
    pub trajectories: usize,
    #[serde(default)]
    pub seed: u64,
}

fn default_traj() -> usize {
    100
}

/// The batch least-squares comparison. Linear mode fits the most recent
/// `window` transitions; Lipschitz mode fits offline trajectories collected
/// before the run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaselineParams {
    #[serde(default = "yes")]
    pub enabled: bool,
    /// Transitions used by the linear baseline; defaults to the reach window.
    #[serde(default)]
    pub window: Option<usize>,
    #[serde(default = "default_offline_traj")]
    pub offline_trajectories: usize,
    #[serde(default = "default_offline_len")]
    pub offline_length: usize,
    /// Initial set of the offline runs; defaults to the scenario's.
    #[serde(default)]
    pub offline_initial: Option<Zonotope>,
    /// Input set of the offline runs; defaults to the scenario's.
    #[serde(default)]
    pub offline_input: Option<Zonotope>,
    /// Order the baseline model set is reduced to before propagation.
    #[serde(default)]
    pub model_reduction_order: Option<usize>,
}

fn yes() -> bool {
    true
}

fn default_offline_traj() -> usize {
    35
}

fn default_offline_len() -> usize {
    10
}

impl Default for BaselineParams {
    fn default() -> Self {
        Self {
            enabled: true,
            window: None,
            offline_trajectories: default_offline_traj(),
            offline_length: default_offline_len(),
            offline_initial: None,
            offline_input: None,
            model_reduction_order: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    /// Default mode when none is given on the command line.
    #[serde(default)]
    pub mode: Option<Mode>,
    pub plant: PlantSpec,
    pub sets: SetsConfig,
    pub estimator: EstimatorConfig,
    pub reach: ReachParams,
    pub run: RunParams,
    #[serde(default = "default_validation")]
    pub validation: ValidationParams,
    #[serde(default)]
    pub baseline: BaselineParams,
}

fn default_validation() -> ValidationParams {
    ValidationParams {
        trajectories: default_traj(),
        seed: 0,
    }
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn plant(&self) -> Result<Plant> {
        Plant::new(&self.plant, self.sets.noise.clone())
    }

    pub fn warmup(&self) -> usize {
        self.run.warmup.unwrap_or(self.reach.window)
    }

    /// Checks every cross-field constraint; errors name the offending field.
    pub fn validate(&self) -> Result<()> {
        let bad = |field: &str, msg: String| Err(Error::Config(format!("{field}: {msg}")));
        let plant = Plant::new(&self.plant, self.sets.noise.clone())
            .map_err(|e| Error::Config(format!("plant: {e}")))?;
        let (nx, nu) = plant.dims();
        if self.sets.initial.dim() != nx {
            return bad("sets.initial", format!("dimension {} but the plant has {nx} states", self.sets.initial.dim()));
        }
        if self.sets.input.dim() != nu {
            return bad("sets.input", format!("dimension {} but the plant has {nu} inputs", self.sets.input.dim()));
        }
        let e = &self.estimator;
        if !(e.lambda > 0.0 && e.lambda <= 1.0) {
            return bad("estimator.lambda", format!("{} is outside (0, 1]", e.lambda));
        }
        if !(e.tau > 0.0) || !(e.g0_scale > 0.0) {
            return bad("estimator", "tau and g0_scale must be positive".into());
        }
        if !(e.sigma_theta >= 0.0) {
            return bad("estimator.sigma_theta", "must be >= 0".into());
        }
        let r = &self.reach;
        if r.horizon == 0 {
            return bad("reach.horizon", "must be at least 1".into());
        }
        if r.window < 2 {
            return bad("reach.window", "must be at least 2".into());
        }
        if r.reduction_order < nx {
            return bad("reach.reduction_order", format!("must be at least the state dimension {nx}"));
        }
        if !(r.sigma >= 0.0) {
            return bad("reach.sigma", "must be >= 0".into());
        }
        if self.run.stride == 0 {
            return bad("run.stride", "must be at least 1".into());
        }
        if self.warmup() > self.run.steps {
            return bad("run.warmup", format!("{} exceeds run.steps {}", self.warmup(), self.run.steps));
        }
        if self.baseline.window.is_some_and(|w| w < 2) {
            return bad("baseline.window", "must be at least 2".into());
        }
        if let Some(z) = &self.baseline.offline_initial {
            if z.dim() != nx {
                return bad("baseline.offline_initial", format!("dimension {} != {nx}", z.dim()));
            }
        }
        if let Some(z) = &self.baseline.offline_input {
            if z.dim() != nu {
                return bad("baseline.offline_input", format!("dimension {} != {nu}", z.dim()));
            }
        }
        Ok(())
    }

    /// Estimator for the given regression, from the configured parameters.
    pub fn estimator(&self, regression: Regression) -> Result<EstimatorState> {
        let (nx, nu) = self.plant()?.dims();
        let n = regression.regressor_len(nx, nu);
        // the regression sees noise through its box hull
        let sigma_v = self.sets.noise.hull_radius().max();
        let noise = NoiseStructure::new(1, nx, sigma_v)?;
        let drift = DriftStructure::new(n, nx, self.estimator.sigma_theta)?;
        let order = self.estimator.reduction_order.unwrap_or(2 * n * nx);
        Ok(EstimatorState::with_defaults(
            noise,
            drift,
            self.estimator.lambda,
            self.estimator.tau,
            self.estimator.g0_scale,
            Some(order),
        )?
        .with_reduction_method(self.estimator.reduction))
    }

    pub fn input_sets(&self) -> Vec<Zonotope> {
        vec![self.sets.input.clone(); self.reach.horizon]
    }

    pub fn ltv_config(&self) -> LtvReachConfig {
        LtvReachConfig {
            sigma_ab: self.reach.sigma,
            input_sets: self.input_sets(),
            noise_set: self.sets.noise.clone(),
            initial_set: self.sets.initial.clone(),
            reduction_order: self.reach.reduction_order,
            drift_offset: self.reach.drift_offset,
            delta_override: self.reach.delta_override,
        }
    }

    pub fn lipschitz_config(&self) -> LipReachConfig {
        LipReachConfig {
            sigma_m: self.reach.sigma,
            input_sets: self.input_sets(),
            noise_set: self.sets.noise.clone(),
            initial_set: self.sets.initial.clone(),
            reduction_order: self.reach.reduction_order,
            drift_offset: self.reach.drift_offset,
            delta_override: self.reach.delta_override,
        }
    }
}

/// Reachable sets computed at one step of the run.
#[derive(Debug, Clone, PartialEq)]
pub struct Trigger {
    /// Plant time of the first propagated step.
    pub time: usize,
    pub reach: ReachResult,
    pub baseline: Option<ReachResult>,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub mode: Mode,
    pub seed: u64,
    pub data: Trajectory,
    pub triggers: Vec<Trigger>,
    pub estimator: EstimatorState,
}

/// Offline trajectories for the Lipschitz baseline, flattened into one data block.
pub fn offline_data(cfg: &ScenarioConfig, plant: &Plant, seed: u64) -> Result<SlidingWindow> {
    let b = &cfg.baseline;
    let (nx, nu) = plant.dims();
    let x0 = b.offline_initial.as_ref().unwrap_or(&cfg.sets.initial);
    let u = b.offline_input.as_ref().unwrap_or(&cfg.sets.input);
    let inputs = vec![u.clone(); b.offline_length];
    let trajs = sample_trajectories(plant, 0, x0, &inputs, b.offline_trajectories, seed ^ OFFLINE_SALT)?;
    let mut data = SlidingWindow::new((b.offline_trajectories * b.offline_length).max(1), nx, nu)?;
    for t in &trajs {
        for k in 0..t.states.len().saturating_sub(1) {
            data.push(&t.states[k], &t.inputs[k], &t.states[k + 1])?;
        }
    }
    Ok(data)
}

const OFFLINE_SALT: u64 = 0x0ff1_14e0_5eed;

fn reduce_baseline(model: MatrixZonotope, order: Option<usize>) -> Result<MatrixZonotope> {
    match order {
        Some(q) => model.reduce(q),
        None => Ok(model),
    }
}

/// Streams the scenario and computes sets at every trigger.
///
/// `recorded` replaces simulation with a recorded trajectory; `stride`
/// overrides the configured one.
pub fn run(
    cfg: &ScenarioConfig,
    mode: Mode,
    seed: u64,
    recorded: Option<&Trajectory>,
    stride: Option<usize>,
) -> Result<RunOutput> {
    let plant = cfg.plant()?;
    let (nx, nu) = plant.dims();
    let regression = mode.regression();
    let stride = stride.unwrap_or(cfg.run.stride).max(1);
    let warmup = cfg.warmup();

    let mut est = cfg.estimator(regression)?;
    let mut window = SlidingWindow::new(cfg.reach.window, nx, nu)?;
    let mut ls_window = SlidingWindow::new(cfg.baseline.window.unwrap_or(cfg.reach.window), nx, nu)?;
    let offline = match (mode, cfg.baseline.enabled) {
        (Mode::Lipschitz, true) => Some(offline_data(cfg, &plant, seed)?),
        _ => None,
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = match recorded {
        Some(t) => {
            if t.states.first().is_some_and(|x| x.len() != nx) || t.inputs.first().is_some_and(|u| u.len() != nu) {
                return Err(Error::Config(format!("trajectory dimensions do not match the plant ({nx} states, {nu} inputs)")));
            }
            t.clone()
        }
        None => {
            let x0 = cfg.sets.initial.sample(&mut rng);
            let inputs: Vec<DVector<f64>> = (0..cfg.run.steps).map(|_| cfg.sets.input.sample(&mut rng)).collect();
            let t = simulate(&plant, 0, &x0, &inputs, &mut rng)?;
            if t.diverged {
                return Err(Error::NonFinite("simulated trajectory diverged".into()));
            }
            t
        }
    };
    let steps = data.states.len().saturating_sub(1).min(data.inputs.len());

    let mut triggers = Vec::new();
    for k in 0..steps {
        let (x, u, x_next) = (&data.states[k], &data.inputs[k], &data.states[k + 1]);
        window.push(x, u, x_next)?;
        ls_window.push(x, u, x_next)?;
        est = est.update(&regression.regressor(x, u), &target(x_next))?;
        let t = k + 1;
        if t < warmup || !(t - warmup).is_multiple_of(stride) || window.fill() < 2 {
            continue;
        }
        let (reach, baseline) = match mode {
            Mode::Ltv => {
                let reach = reach_ltv(&est, &window, &cfg.ltv_config())?;
                let baseline = if cfg.baseline.enabled {
                    let model = batch_ls_model_set(&ls_window, &cfg.sets.noise, Regression::Linear)?;
                    let model = reduce_baseline(model, cfg.baseline.model_reduction_order)?;
                    // the baseline has no drift or coverage-gap inflation
                    let mut bcfg = cfg.ltv_config();
                    bcfg.sigma_ab = 0.0;
                    Some(reach_ltv_from_model(&model, 0.0, &bcfg)?)
                } else {
                    None
                };
                (reach, baseline)
            }
            Mode::Lipschitz => {
                let reach = reach_lipschitz(&est, &window, &cfg.lipschitz_config())?;
                let baseline = match &offline {
                    Some(data) => {
                        let model = batch_ls_from_data(&data.x_plus(), &data.data_matrix(Regression::Affine), &cfg.sets.noise)?;
                        let model = reduce_baseline(model, cfg.baseline.model_reduction_order)?;
                        let mut bcfg = cfg.lipschitz_config();
                        bcfg.sigma_m = 0.0;
                        Some(reach_lipschitz_from_model(&model, data, &bcfg)?)
                    }
                    None => None,
                };
                (reach, baseline)
            }
        };
        info!("step {t}: reachable sets over {} steps", reach.horizon());
        triggers.push(Trigger { time: t, reach, baseline });
    }
    Ok(RunOutput {
        mode,
        seed,
        data,
        triggers,
        estimator: est,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriggerEntry {
    pub time: usize,
    pub reach: String,
    pub bounds: String,
    pub baseline: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub name: String,
    pub mode: Mode,
    pub seed: u64,
    pub steps: usize,
    pub data: String,
    pub estimator: String,
    pub triggers: Vec<TriggerEntry>,
    pub config: ScenarioConfig,
}

pub const MANIFEST: &str = "manifest.json";

impl Manifest {
    pub fn load(dir: &Path) -> Result<Self> {
        let path = dir.join(MANIFEST);
        let text = std::fs::read_to_string(&path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }
}

/// Writes the run into `dir` and returns its manifest.
pub fn write_run(dir: &Path, cfg: &ScenarioConfig, out: &RunOutput) -> Result<Manifest> {
    std::fs::create_dir_all(dir)?;
    write_trajectory(&dir.join("data.csv"), &out.data)?;
    std::fs::write(
        dir.join("estimator.json"),
        serde_json::to_string_pretty(&out.estimator.to_snapshot())?,
    )?;
    let mut triggers = Vec::with_capacity(out.triggers.len());
    for t in &out.triggers {
        let reach = format!("reach_{:04}.json", t.time);
        let bounds = format!("bounds_{:04}.csv", t.time);
        t.reach.write_json(&dir.join(&reach))?;
        t.reach.write_bounds_csv(&dir.join(&bounds))?;
        let baseline = match &t.baseline {
            Some(b) => {
                let name = format!("baseline_{:04}.json", t.time);
                b.write_json(&dir.join(&name))?;
                Some(name)
            }
            None => None,
        };
        triggers.push(TriggerEntry {
            time: t.time,
            reach,
            bounds,
            baseline,
        });
    }
    let manifest = Manifest {
        name: cfg.name.clone(),
        mode: out.mode,
        seed: out.seed,
        steps: out.data.len(),
        data: "data.csv".into(),
        estimator: "estimator.json".into(),
        triggers,
        config: cfg.clone(),
    };
    std::fs::write(dir.join(MANIFEST), serde_json::to_string_pretty(&manifest)?)?;
    Ok(manifest)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriggerValidation {
    pub time: usize,
    pub report: ValidationReport,
    pub baseline: Option<ValidationReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunValidation {
    pub seed: u64,
    pub trajectories: usize,
    pub violations: usize,
    pub baseline_violations: usize,
    pub triggers: Vec<TriggerValidation>,
}

/// Seed of the validation runs at a trigger; both methods see the same runs.
pub fn trigger_seed(seed: u64, time: usize) -> u64 {
    seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ time as u64
}

/// Validates sets in memory; also returns the sampled runs per trigger.
pub fn validate_triggers(
    cfg: &ScenarioConfig,
    triggers: &[(usize, ReachResult, Option<ReachResult>)],
    n_traj: usize,
    seed: u64,
) -> Result<(RunValidation, Vec<Vec<Trajectory>>)> {
    let plant = cfg.plant()?;
    let mut out = RunValidation {
        seed,
        trajectories: n_traj,
        violations: 0,
        baseline_violations: 0,
        triggers: Vec::new(),
    };
    let mut samples = Vec::new();
    for (time, reach, baseline) in triggers {
        let s = trigger_seed(seed, *time);
        let inputs = cfg.input_sets();
        let trajs = sample_trajectories(&plant, *time, &cfg.sets.initial, &inputs[..reach.horizon()], n_traj, s)?;
        let report = check_trajectories(&reach.sets, &trajs, s)?;
        let baseline = baseline
            .as_ref()
            .map(|b| check_trajectories(&b.sets, &trajs, s))
            .transpose()?;
        out.violations += report.violations.len();
        out.baseline_violations += baseline.as_ref().map_or(0, |b| b.violations.len());
        out.triggers.push(TriggerValidation {
            time: *time,
            report,
            baseline,
        });
        samples.push(trajs);
    }
    Ok((out, samples))
}

fn read_reach(dir: &Path, name: &str) -> Result<ReachResult> {
    let path = dir.join(name);
    if !path.exists() {
        return Err(Error::Config(format!("missing result file {}", path.display())));
    }
    ReachResult::read_json(&path)
}

/// Validates a run directory with the run's seed, writing `validation.json`,
/// `validation_summary.csv` and `samples.csv`.
pub fn validate_dir(dir: &Path, cfg: Option<&ScenarioConfig>, n_traj: Option<usize>) -> Result<RunValidation> {
    let manifest = Manifest::load(dir)?;
    let cfg = cfg.unwrap_or(&manifest.config);
    let mut triggers = Vec::new();
    for t in &manifest.triggers {
        let reach = read_reach(dir, &t.reach)?;
        let baseline = t.baseline.as_deref().map(|b| read_reach(dir, b)).transpose()?;
        triggers.push((t.time, reach, baseline));
    }
    let n = n_traj.unwrap_or(cfg.validation.trajectories);
    let (report, samples) = validate_triggers(cfg, &triggers, n, manifest.seed)?;
    std::fs::write(dir.join("validation.json"), serde_json::to_string_pretty(&report)?)?;
    if let Some(first) = report.triggers.first() {
        first.report.write_summary_csv(&dir.join("validation_summary.csv"))?;
    }
    write_samples(&dir.join("samples.csv"), &triggers, &samples)?;
    Ok(report)
}

fn write_samples(
    path: &Path,
    triggers: &[(usize, ReachResult, Option<ReachResult>)],
    samples: &[Vec<Trajectory>],
) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    let nx = triggers.first().map_or(0, |t| t.1.sets[0].dim());
    let mut header = vec!["time".to_string(), "trajectory".into(), "step".into()];
    header.extend((1..=nx).map(|i| format!("x{i}")));
    w.write_record(&header)?;
    for ((time, _, _), trajs) in triggers.iter().zip(samples) {
        for (i, t) in trajs.iter().enumerate() {
            for (k, x) in t.states.iter().enumerate() {
                let mut row = vec![time.to_string(), i.to_string(), k.to_string()];
                row.extend(x.iter().map(|v| format!("{v:e}")));
                w.write_record(&row)?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// Writes `plot/poly_<time>_<step>.csv` vertex files for the projection onto
/// `dims`, and `plot/samples_<time>.csv` when validation samples exist.
pub fn export_plot(dir: &Path, dims: (usize, usize)) -> Result<Vec<PathBuf>> {
    let manifest = Manifest::load(dir)?;
    let plot = dir.join("plot");
    std::fs::create_dir_all(&plot)?;
    let mut written = Vec::new();
    for t in &manifest.triggers {
        let reach = read_reach(dir, &t.reach)?;
        let nx = reach.sets[0].dim();
        if dims.0 >= nx || dims.1 >= nx || dims.0 == dims.1 {
            return Err(Error::Config(format!("dims ({}, {}) invalid for {nx} states", dims.0, dims.1)));
        }
        for (k, z) in reach.sets.iter().enumerate() {
            let path = plot.join(format!("poly_{:04}_{:02}.csv", t.time, k));
            let mut w = csv::Writer::from_path(&path)?;
            w.write_record(["x", "y"])?;
            for v in vertices_2d(z, dims)? {
                w.write_record([format!("{:e}", v[0]), format!("{:e}", v[1])])?;
            }
            w.flush()?;
            written.push(path);
        }
    }
    let samples = dir.join("samples.csv");
    if samples.exists() {
        let mut rdr = csv::Reader::from_path(&samples)?;
        let mut writers: std::collections::BTreeMap<String, csv::Writer<std::fs::File>> = Default::default();
        for rec in rdr.records() {
            let rec = rec?;
            let time = rec[0].to_string();
            if !writers.contains_key(&time) {
                let path = plot.join(format!("samples_{:0>4}.csv", time));
                let mut w = csv::Writer::from_path(&path)?;
                w.write_record(["trajectory", "step", "x", "y"])?;
                writers.insert(time.clone(), w);
                written.push(path);
            }
            let w = writers.get_mut(&time).expect("inserted");
            w.write_record([&rec[1], &rec[2], &rec[3 + dims.0], &rec[3 + dims.1]])?;
        }
        for w in writers.values_mut() {
            w.flush()?;
        }
    }
    Ok(written)
}

/// Reads a recorded trajectory for `--traj`.
pub fn load_trajectory(path: &Path) -> Result<Trajectory> {
    if !path.exists() {
        return Err(Error::Config(format!("missing trajectory file {}", path.display())));
    }
    read_trajectory(path)
}
