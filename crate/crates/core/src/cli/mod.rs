//! `inna-lab` command line: step bounds, regime classification, single
//! runs and experiment reproduction.
//!
//! Exit codes: 0 success (or `run` reaching the gradient tolerance),
//! 2 usage/configuration/I-O error, 3 `run` hit `max_iter`, 4 `run`
//! diverged.

mod config;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::DVector;
use serde::Serialize;

pub use config::{Psi0, RunConfig};

use crate::dynamics::{optimizer, step_size_warnings, AlgoParams, Budget, PhaseState, Termination};
use crate::harness::{
    default_spiral_configs, emit_csv, run_escape_figure, run_escape_montecarlo, run_regime_report, run_spiral_experiment, write_json, Algorithm,
    InitMode, MonteCarloConfig, MonteCarloReport,
};
use crate::landscape::{builtin, classify_critical, CriticalLabel, DEFAULT_CRITICAL_TOL, DEFAULT_ZERO_TOL};
use crate::spectrum::{classify_stationary, gamma_convergence_bound, gamma_diffeo_bound, spiral_interval, HyperParams, SpiralInterval, StationaryClass};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_MAX_ITER: i32 = 3;
pub const EXIT_DIVERGED: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "inna-lab", version, about = "Inertial Newton dynamics: spectra, step bounds, runs and experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Step-size bounds and the spiral interval, as JSON on stdout.
    Bounds {
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, allow_hyphen_values = true)]
        beta: f64,
        #[arg(long, allow_hyphen_values = true)]
        lipschitz: f64,
    },
    /// Regime report at a critical point.
    Classify(ClassifyArgs),
    /// A single optimizer run; writes trajectory.csv and summary.json.
    Run(RunArgs),
    /// Regenerate an experiment's artifacts under --out.
    Reproduce {
        experiment: Experiment,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "inna-lab-out")]
        out: PathBuf,
        /// Monte Carlo runs per configuration (table1 only).
        #[arg(long, default_value_t = 1000)]
        n_runs: usize,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum Experiment {
    Spiral,
    EscapeFigure,
    Table1,
}

#[derive(Debug, Args)]
struct ClassifyArgs {
    #[arg(long)]
    landscape: String,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    theta0: Vec<f64>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: f64,
    #[arg(long, allow_hyphen_values = true)]
    beta: f64,
    #[arg(long, default_value_t = 0.01)]
    gamma: f64,
    /// Overrides the landscape's declared gradient Lipschitz constant.
    #[arg(long)]
    lipschitz: Option<f64>,
    /// Print JSON instead of text.
    #[arg(long)]
    json: bool,
    /// Also write regime.json and regime.txt here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// JSON run configuration; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    landscape: Option<String>,
    /// inna, din, gd or inna_vanishing.
    #[arg(long)]
    algorithm: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    theta0: Option<Vec<f64>>,
    /// Comma-separated vector, or `auto` for (1 − αβ)θ0.
    #[arg(long, allow_hyphen_values = true)]
    psi0: Option<String>,
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long)]
    grad_tol: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the effective configuration as canonical JSON and exit.
    #[arg(long)]
    dump_config: bool,
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn dispatch(command: Command) -> Result<i32> {
    match command {
        Command::Bounds { alpha, beta, lipschitz } => cmd_bounds(alpha, beta, lipschitz),
        Command::Classify(args) => cmd_classify(args),
        Command::Run(args) => cmd_run(args),
        Command::Reproduce { experiment, seed, out, n_runs } => cmd_reproduce(experiment, seed, &out, n_runs),
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|source| Error::Json { context: "stdout".into(), source })
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

#[derive(Debug, Serialize)]
struct BoundsOutput {
    alpha: f64,
    beta: f64,
    lipschitz: f64,
    gamma_diffeo: f64,
    gamma_convergence: f64,
    spiral_interval: SpiralInterval,
}

fn cmd_bounds(alpha: f64, beta: f64, lipschitz: f64) -> Result<i32> {
    let out = BoundsOutput {
        alpha,
        beta,
        lipschitz,
        gamma_diffeo: gamma_diffeo_bound(alpha, beta, lipschitz)?,
        gamma_convergence: gamma_convergence_bound(alpha, beta, lipschitz)?,
        spiral_interval: spiral_interval(alpha, beta),
    };
    println!("{}", to_json(&out)?);
    Ok(EXIT_OK)
}

fn cmd_classify(args: ClassifyArgs) -> Result<i32> {
    let landscape = builtin(&args.landscape)?;
    if args.theta0.len() != landscape.dim() {
        return Err(Error::DimensionMismatch { expected: landscape.dim(), got: args.theta0.len() });
    }
    let hp = HyperParams::new(args.alpha, args.beta, args.gamma)?;
    let report = run_regime_report(landscape.as_ref(), &DVector::from_vec(args.theta0), &hp, args.lipschitz)?;
    if let Some(dir) = &args.out {
        create_dir(dir)?;
        write_json(&report, &dir.join("regime.json"))?;
        let path = dir.join("regime.txt");
        fs::write(&path, report.to_text()).map_err(|e| Error::io(&path, e))?;
    }
    if args.json {
        println!("{}", to_json(&report)?);
    } else {
        print!("{}", report.to_text());
    }
    Ok(EXIT_OK)
}

fn parse_vector(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| Error::invalid(format!("cannot parse `{s}` as a number"))))
        .collect()
}

fn effective_config(args: &RunArgs) -> Result<RunConfig> {
    let mut c = match &args.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(v) = &args.landscape {
        c.landscape = v.clone();
    }
    if let Some(v) = &args.algorithm {
        c.algorithm = v.clone();
    }
    if let Some(v) = args.alpha {
        c.hp.alpha = v;
    }
    if let Some(v) = args.beta {
        c.hp.beta = v;
    }
    if let Some(v) = args.gamma {
        c.hp.gamma = v;
    }
    if let Some(v) = &args.theta0 {
        c.theta0 = v.clone();
    }
    if let Some(v) = &args.psi0 {
        c.psi0 = if v.trim() == "auto" { Psi0::Auto } else { Psi0::Vector(parse_vector(v)?) };
    }
    if let Some(v) = args.max_iter {
        c.max_iter = v;
    }
    if let Some(v) = args.grad_tol {
        c.grad_tol = v;
    }
    if let Some(v) = args.seed {
        c.seed = v;
    }
    if let Some(v) = &args.out {
        c.out_dir = v.display().to_string();
    }
    Ok(c)
}

#[derive(Debug, Serialize)]
struct RunSummary {
    config: RunConfig,
    terminated_by: Termination,
    steps: usize,
    final_theta: Vec<f64>,
    final_psi: Vec<f64>,
    final_loss: f64,
    final_grad_norm: f64,
    final_coupling_residual: f64,
    /// `None` when the end point is not critical.
    critical_label: Option<CriticalLabel>,
    stationary: StationaryClass,
    warnings: Vec<String>,
}

fn cmd_run(args: RunArgs) -> Result<i32> {
    let cfg = effective_config(&args)?;
    if args.dump_config {
        print!("{}", cfg.to_canonical_json());
        return Ok(EXIT_OK);
    }
    let landscape = builtin(&cfg.landscape)?;
    cfg.hp.validate()?;
    let theta0 = DVector::from_vec(cfg.theta0.clone());
    if theta0.len() != landscape.dim() {
        return Err(Error::DimensionMismatch { expected: landscape.dim(), got: theta0.len() });
    }
    let s0 = PhaseState::new(theta0, DVector::from_vec(cfg.psi0_vector()))?;
    let opt = optimizer(&cfg.algorithm, &AlgoParams { hp: cfg.hp, alpha_cap: cfg.alpha_cap })?;

    let warnings = match cfg.algorithm.as_str() {
        "inna" | "din" => step_size_warnings(&cfg.hp, landscape.lipschitz_grad()),
        "gd" => match landscape.lipschitz_grad() {
            Some(l) if cfg.hp.gamma >= 2.0 / l => vec![format!("gamma {} >= 2/L = {} (L = {l}); descent not guaranteed", cfg.hp.gamma, 2.0 / l)],
            _ => vec![],
        },
        _ => vec![],
    };
    for w in &warnings {
        eprintln!("warning: {w}");
    }

    let traj = opt.run(landscape.as_ref(), &s0, Budget { max_iter: cfg.max_iter, grad_tol: cfg.grad_tol })?;
    let out_dir = PathBuf::from(&cfg.out_dir);
    create_dir(&out_dir)?;
    emit_csv(&traj, &out_dir.join("trajectory.csv"))?;

    let end = traj.last();
    let summary = RunSummary {
        terminated_by: traj.terminated_by,
        steps: traj.step_count,
        final_theta: end.theta.iter().copied().collect(),
        final_psi: end.psi.iter().copied().collect(),
        final_loss: *traj.losses.last().expect("non-empty"),
        final_grad_norm: *traj.grad_norms.last().expect("non-empty"),
        final_coupling_residual: *traj.coupling_residuals.last().expect("non-empty"),
        critical_label: classify_critical(landscape.as_ref(), &end.theta, DEFAULT_ZERO_TOL, DEFAULT_CRITICAL_TOL)
            .ok()
            .map(|c| c.label),
        stationary: classify_stationary(landscape.as_ref(), &end.theta, &cfg.hp, DEFAULT_CRITICAL_TOL),
        warnings,
        config: cfg,
    };
    write_json(&summary, &out_dir.join("summary.json"))?;
    println!("{}", to_json(&summary)?);
    Ok(match traj.terminated_by {
        Termination::GradTol => EXIT_OK,
        Termination::MaxIter => {
            eprintln!("warning: max_iter reached before the gradient tolerance");
            EXIT_MAX_ITER
        }
        Termination::Diverged => {
            eprintln!(
                "error: run diverged after {} steps (non-finite state or |theta| > {:e}); try a smaller gamma",
                traj.step_count,
                crate::dynamics::DIVERGENCE_NORM
            );
            EXIT_DIVERGED
        }
    })
}

/// The six escape-table configurations: `(file stem, algorithm, damping, init)`.
pub fn table1_configs(seed: u64, n_runs: usize) -> Result<Vec<(String, Algorithm, MonteCarloConfig)>> {
    let modes = [
        ("off_manifold", InitMode::OffManifoldGaussian { sigma: MonteCarloConfig::DEFAULT_SIGMA }),
        ("on_manifold", InitMode::OnManifold { range: MonteCarloConfig::DEFAULT_RANGE }),
    ];
    let algos = [
        ("inna_ab_lt1", Algorithm::Inna, (2.0, 0.1)),
        ("inna_ab_gt1", Algorithm::Inna, (2.0, 1.0)),
        ("gd", Algorithm::Gd, (0.0, 1.0)),
    ];
    let mut out = Vec::new();
    for (mode_name, mode) in modes {
        for (algo_name, algo, damping) in algos {
            let cfg = MonteCarloConfig::with_defaults(algo, damping, mode, n_runs, seed)?;
            out.push((format!("table1_{algo_name}_{mode_name}"), algo, cfg));
        }
    }
    Ok(out)
}

fn table1_text(rows: &[(String, MonteCarloReport)]) -> String {
    let mut s = String::from("config                          -sqrt2    +sqrt2    saddle    unresolved  mean_escape\n");
    for (name, r) in rows {
        let f = r.fractions;
        let esc = r.mean_escape_iters.map_or_else(|| "-".to_string(), |m| format!("{m:.1}"));
        s.push_str(&format!(
            "{name:<30}  {:>7.1}%  {:>7.1}%  {:>7.1}%  {:>9.1}%  {esc:>11}\n",
            100.0 * f.minus_sqrt2,
            100.0 * f.plus_sqrt2,
            100.0 * f.saddle,
            100.0 * f.unresolved
        ));
    }
    s
}

fn cmd_reproduce(experiment: Experiment, seed: u64, out: &Path, n_runs: usize) -> Result<i32> {
    create_dir(out)?;
    match experiment {
        Experiment::Spiral => {
            let summaries = run_spiral_experiment(&default_spiral_configs(), &DVector::from_vec(vec![1.0, 1.0]), Some(out))?;
            println!("{}", to_json(&summaries)?);
        }
        Experiment::EscapeFigure => {
            let runs = run_escape_figure(Some(out))?;
            println!("{}", to_json(&runs)?);
        }
        Experiment::Table1 => {
            let mut rows = Vec::new();
            for (name, algo, cfg) in table1_configs(seed, n_runs)? {
                eprintln!("running {name} ({} runs)", cfg.n_runs);
                let report = run_escape_montecarlo(&cfg, algo)?;
                write_json(&report, &out.join(format!("{name}.json")))?;
                rows.push((name, report));
            }
            let text = table1_text(&rows);
            let path = out.join("table1_summary.txt");
            fs::write(&path, &text).map_err(|e| Error::io(&path, e))?;
            print!("{text}");
        }
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(args: &[&str]) -> i32 {
        main_with_args(std::iter::once("inna-lab").chain(args.iter().copied()))
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(code(&["bounds", "--alpha", "2", "--beta", "0.1"]), EXIT_USAGE);
        assert_eq!(code(&["frobnicate"]), EXIT_USAGE);
        assert_eq!(code(&["bounds", "--alpha", "-2", "--beta", "0.1", "--lipschitz", "4"]), EXIT_USAGE);
        assert_eq!(code(&["bounds", "--alpha", "2", "--beta", "0.1", "--lipschitz", "4"]), EXIT_OK);
    }

    #[test]
    fn table1_has_six_distinct_configs() {
        let cfgs = table1_configs(7, 10).unwrap();
        assert_eq!(cfgs.len(), 6);
        let mut names: Vec<_> = cfgs.iter().map(|c| c.0.clone()).collect();
        names.dedup();
        assert_eq!(names.len(), 6);
    }

    #[test]
    fn flags_override_config() {
        let args = RunArgs {
            config: None,
            landscape: Some("doublewell".into()),
            algorithm: None,
            alpha: Some(1.0),
            beta: None,
            gamma: None,
            theta0: Some(vec![0.5, -0.5]),
            psi0: Some("0,1".into()),
            max_iter: None,
            grad_tol: None,
            seed: Some(3),
            out: None,
            dump_config: false,
        };
        let c = effective_config(&args).unwrap();
        assert_eq!(c.landscape, "doublewell");
        assert_eq!(c.hp.alpha, 1.0);
        assert_eq!(c.hp.beta, RunConfig::default().hp.beta);
        assert_eq!(c.psi0, Psi0::Vector(vec![0.0, 1.0]));
        assert_eq!(c.seed, 3);
    }
}
