use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use zonoreach::scenario::{self, Mode, ScenarioConfig};
use zonoreach::Error;

#[derive(Parser)]
#[command(name = "zonoreach", version, about = "Online data-driven reachability with zonotopes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Stream a scenario and compute reachable sets at each trigger.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// `ltv` or `lipschitz`; defaults to the config's mode.
        #[arg(long)]
        mode: Option<String>,
        /// Output directory (env ZONOREACH_OUT).
        #[arg(long, env = "ZONOREACH_OUT")]
        out: PathBuf,
        /// Seed (env ZONOREACH_SEED); defaults to the validation seed.
        #[arg(long, env = "ZONOREACH_SEED")]
        seed: Option<u64>,
        /// Recorded trajectory CSV used instead of simulation.
        #[arg(long)]
        traj: Option<PathBuf>,
        #[arg(long)]
        stride: Option<usize>,
    },
    /// Check a run directory against simulated ground truth; exits 1 on violations.
    Validate {
        dir: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        n_traj: Option<usize>,
    },
    /// Write 2-D polygon and sample files for plotting.
    ExportPlot {
        dir: PathBuf,
        /// Two state indices, e.g. `0,1`.
        #[arg(long, default_value = "0,1")]
        dims: String,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config, mode, out, seed, traj, stride } => cmd_run(config, mode, out, seed, traj, stride),
        Command::Validate { dir, config, n_traj } => cmd_validate(dir, config, n_traj),
        Command::ExportPlot { dir, dims } => cmd_export_plot(dir, &dims),
    };
    match result {
        Ok((status, code)) => {
            println!("{status}");
            ExitCode::from(code)
        }
        Err(e) => {
            let code = if e.is_numeric() { 3 } else { 2 };
            eprintln!("error: {e}");
            println!("{}", json!({"status": "error", "exit_code": code, "message": e.to_string()}));
            ExitCode::from(code)
        }
    }
}

type Outcome = Result<(serde_json::Value, u8), Error>;

fn cmd_run(
    config: PathBuf,
    mode: Option<String>,
    out: PathBuf,
    seed: Option<u64>,
    traj: Option<PathBuf>,
    stride: Option<usize>,
) -> Outcome {
    let cfg = ScenarioConfig::load(&config)?;
    let mode = match mode {
        Some(m) => m.parse()?,
        None => cfg.mode.unwrap_or(Mode::Ltv),
    };
    let recorded = traj.as_deref().map(scenario::load_trajectory).transpose()?;
    let seed = seed.unwrap_or(cfg.validation.seed);
    let run = scenario::run(&cfg, mode, seed, recorded.as_ref(), stride)?;
    let manifest = scenario::write_run(&out, &cfg, &run)?;
    Ok((
        json!({
            "status": "ok",
            "command": "run",
            "out": out,
            "steps": manifest.steps,
            "triggers": manifest.triggers.len(),
        }),
        0,
    ))
}

fn cmd_validate(dir: PathBuf, config: Option<PathBuf>, n_traj: Option<usize>) -> Outcome {
    let cfg = config.as_deref().map(ScenarioConfig::load).transpose()?;
    let report = scenario::validate_dir(&dir, cfg.as_ref(), n_traj)?;
    for t in &report.triggers {
        for v in &t.report.violations {
            eprintln!("violation: time {} trajectory {} step {} state {:?}", t.time, v.trajectory, v.step, v.state);
        }
    }
    let checks: usize = report.triggers.iter().map(|t| t.report.containment_checks).sum();
    let code = u8::from(report.violations > 0);
    Ok((
        json!({
            "status": if code == 0 { "ok" } else { "violations" },
            "command": "validate",
            "checks": checks,
            "violations": report.violations,
            "baseline_violations": report.baseline_violations,
        }),
        code,
    ))
}

fn cmd_export_plot(dir: PathBuf, dims: &str) -> Outcome {
    let parsed: Vec<usize> = dims
        .split(',')
        .map(|s| s.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|e| Error::Config(format!("--dims `{dims}`: {e}")))?;
    let [a, b] = parsed[..] else {
        return Err(Error::Config(format!("--dims `{dims}` must name two indices")));
    };
    let files = scenario::export_plot(&dir, (a, b))?;
    Ok((json!({"status": "ok", "command": "export-plot", "files": files.len()}), 0))
}
