//! Saddle-escape statistics on the double well.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{gd_run, inna_run, PhaseState, Trajectory};
use crate::landscape::{DoubleWell, Landscape};
use crate::spectrum::{gamma_convergence_bound, gamma_diffeo_bound, HyperParams};
use crate::{Error, Result};

/// Environment variable capping the number of Monte Carlo workers.
pub const THREADS_ENV: &str = "INNA_LAB_THREADS";

/// Fraction of the theoretical step-size bounds used by default.
pub const DEFAULT_STEP_FRACTION: f64 = 0.8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Algorithm {
    #[serde(rename = "INNA")]
    Inna,
    #[serde(rename = "GD")]
    Gd,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum InitMode {
    /// `θ0 ~ N(0, σ² I)`.
    OffManifoldGaussian { sigma: f64 },
    /// `θ0 = (0, z)`, `z ~ U[−range, range]`: the saddle's stable manifold.
    OnManifold { range: f64 },
}

/// `hp` drives INNA; gradient descent reads only `hp.gamma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloConfig {
    pub n_runs: usize,
    pub init_mode: InitMode,
    pub hp: HyperParams,
    pub max_iter: usize,
    pub basin_tol: f64,
    pub escape_radius: f64,
    pub seed: u64,
}

impl MonteCarloConfig {
    pub const DEFAULT_MAX_ITER: usize = 5000;
    pub const DEFAULT_BASIN_TOL: f64 = 0.1;
    pub const DEFAULT_ESCAPE_RADIUS: f64 = 0.5;
    pub const DEFAULT_SIGMA: f64 = 1e-12;
    pub const DEFAULT_RANGE: f64 = 1.0;

    /// Defaults for `algorithm`: INNA steps at 0.8 × the smaller of the two
    /// step bounds, gradient descent at 0.8 / L, with the double well's
    /// boxed Lipschitz constant. `damping` is ignored for GD.
    pub fn with_defaults(algorithm: Algorithm, damping: (f64, f64), init_mode: InitMode, n_runs: usize, seed: u64) -> Result<Self> {
        let l = DoubleWell.lipschitz_grad().expect("double well declares a boxed constant");
        let hp = match algorithm {
            Algorithm::Inna => {
                let (a, b) = damping;
                let bound = gamma_diffeo_bound(a, b, l)?.min(gamma_convergence_bound(a, b, l)?);
                HyperParams::new(a, b, DEFAULT_STEP_FRACTION * bound)?
            }
            Algorithm::Gd => HyperParams::new(0.0, 1.0, DEFAULT_STEP_FRACTION / l)?,
        };
        let cfg = Self {
            n_runs,
            init_mode,
            hp,
            max_iter: Self::DEFAULT_MAX_ITER,
            basin_tol: Self::DEFAULT_BASIN_TOL,
            escape_radius: Self::DEFAULT_ESCAPE_RADIUS,
            seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.hp.validate()?;
        if self.n_runs == 0 {
            return Err(Error::invalid("n_runs must be positive"));
        }
        match self.init_mode {
            InitMode::OffManifoldGaussian { sigma } if !(sigma > 0.0 && sigma.is_finite()) => {
                return Err(Error::invalid(format!("sigma must be > 0, got {sigma}")));
            }
            InitMode::OnManifold { range } if !(range >= 0.0 && range.is_finite()) => {
                return Err(Error::invalid(format!("range must be >= 0, got {range}")));
            }
            _ => {}
        }
        if !(self.basin_tol > 0.0 && self.escape_radius > self.basin_tol) {
            return Err(Error::invalid(format!(
                "need escape_radius > basin_tol > 0, got {} and {}",
                self.escape_radius, self.basin_tol
            )));
        }
        Ok(())
    }

    /// Initial points, one independent stream per run index so the draw
    /// does not depend on scheduling.
    pub fn sample_inits(&self) -> Vec<DVector<f64>> {
        (0..self.n_runs as u64)
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                rng.set_stream(i);
                match self.init_mode {
                    InitMode::OffManifoldGaussian { sigma } => {
                        let n = Normal::new(0.0, sigma).expect("validated sigma");
                        DVector::from_fn(2, |_, _| n.sample(&mut rng))
                    }
                    InitMode::OnManifold { range } => {
                        let z = if range > 0.0 { rng.random_range(-range..=range) } else { 0.0 };
                        DVector::from_vec(vec![0.0, z])
                    }
                }
            })
            .collect()
    }
}

/// Per-basin tallies, in a fixed key order.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct BasinCounts<T> {
    pub minus_sqrt2: T,
    pub plus_sqrt2: T,
    pub saddle: T,
    pub unresolved: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Basin {
    MinusSqrt2,
    PlusSqrt2,
    Saddle,
    Unresolved,
}

/// Nearest critical point of the double well within `tol`.
pub fn classify_basin(theta: &DVector<f64>, tol: f64) -> Basin {
    let r2 = std::f64::consts::SQRT_2;
    [(-r2, Basin::MinusSqrt2), (r2, Basin::PlusSqrt2), (0.0, Basin::Saddle)]
        .into_iter()
        .map(|(x, b)| (((theta[0] - x).powi(2) + theta[1].powi(2)).sqrt(), b))
        .filter(|(d, _)| d.is_finite() && *d <= tol)
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .map_or(Basin::Unresolved, |(_, b)| b)
}

/// First `k` with `‖θ_k‖ > radius`, for runs that start inside the ball.
pub fn escape_iteration(traj: &Trajectory, radius: f64) -> Option<usize> {
    if traj.states.first()?.theta.norm() > radius {
        return None;
    }
    traj.states.iter().position(|s| s.theta.norm() > radius)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunOutcome {
    pub basin: Basin,
    pub escape_iter: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloReport {
    pub algorithm: Algorithm,
    pub n_runs: usize,
    pub seed: u64,
    pub counts: BasinCounts<usize>,
    pub fractions: BasinCounts<f64>,
    pub mean_escape_iters: Option<f64>,
    pub escaped_runs: usize,
    /// Set when no run ended in any basin.
    pub unresolved_dominant: bool,
    pub config: MonteCarloConfig,
}

impl MonteCarloReport {
    fn aggregate(cfg: &MonteCarloConfig, algorithm: Algorithm, outcomes: &[RunOutcome]) -> Self {
        let mut counts = BasinCounts::<usize>::default();
        for o in outcomes {
            *match o.basin {
                Basin::MinusSqrt2 => &mut counts.minus_sqrt2,
                Basin::PlusSqrt2 => &mut counts.plus_sqrt2,
                Basin::Saddle => &mut counts.saddle,
                Basin::Unresolved => &mut counts.unresolved,
            } += 1;
        }
        let n = outcomes.len();
        let frac = |c: usize| c as f64 / n as f64;
        let escapes: Vec<usize> = outcomes.iter().filter_map(|o| o.escape_iter).collect();
        Self {
            algorithm,
            n_runs: n,
            seed: cfg.seed,
            fractions: BasinCounts {
                minus_sqrt2: frac(counts.minus_sqrt2),
                plus_sqrt2: frac(counts.plus_sqrt2),
                saddle: frac(counts.saddle),
                unresolved: frac(counts.unresolved),
            },
            mean_escape_iters: (!escapes.is_empty()).then(|| escapes.iter().sum::<usize>() as f64 / escapes.len() as f64),
            escaped_runs: escapes.len(),
            unresolved_dominant: counts.unresolved == n,
            counts,
            config: *cfg,
        }
    }
}

/// Worker count from [`THREADS_ENV`], if set to a positive integer.
pub fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse().ok().filter(|&n| n > 0)
}

fn single_run(cfg: &MonteCarloConfig, algorithm: Algorithm, theta0: &DVector<f64>) -> Result<RunOutcome> {
    // No gradient stop: starting points sit where the gradient is ~1e-11,
    // so every run uses the full budget and is judged by where it ends.
    let traj = match algorithm {
        Algorithm::Inna => {
            let s0 = PhaseState::on_manifold(theta0.clone(), cfg.hp.alpha, cfg.hp.beta);
            inna_run(&DoubleWell, &s0, &cfg.hp, cfg.max_iter, 0.0)?
        }
        Algorithm::Gd => gd_run(&DoubleWell, theta0, cfg.hp.gamma, cfg.max_iter, 0.0)?,
    };
    Ok(RunOutcome {
        basin: classify_basin(traj.final_theta(), cfg.basin_tol),
        escape_iter: escape_iteration(&traj, cfg.escape_radius),
    })
}

/// Runs one trajectory per supplied starting point. Results are collected
/// in input order, so the report does not depend on the worker count.
pub fn run_escape_montecarlo_from(cfg: &MonteCarloConfig, algorithm: Algorithm, inits: &[DVector<f64>]) -> Result<MonteCarloReport> {
    cfg.validate()?;
    if let Some(bad) = inits.iter().find(|t| t.len() != 2) {
        return Err(Error::DimensionMismatch { expected: 2, got: bad.len() });
    }
    let work = || inits.par_iter().map(|t| single_run(cfg, algorithm, t)).collect::<Result<Vec<_>>>();
    let outcomes = match thread_cap() {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::invalid(format!("cannot build a {n}-thread pool: {e}")))?
            .install(work)?,
        None => work()?,
    };
    let mut cfg = *cfg;
    cfg.n_runs = inits.len();
    Ok(MonteCarloReport::aggregate(&cfg, algorithm, &outcomes))
}

pub fn run_escape_montecarlo(cfg: &MonteCarloConfig, algorithm: Algorithm) -> Result<MonteCarloReport> {
    cfg.validate()?;
    run_escape_montecarlo_from(cfg, algorithm, &cfg.sample_inits())
}
