//! Name → optimizer lookup so callers can pick an algorithm at runtime.

use serde::{Deserialize, Serialize};

use super::{din_integrate, gd_run, inna_run, inna_run_vanishing, PhaseState, Trajectory, DEFAULT_ALPHA_CAP};
use crate::landscape::Landscape;
use crate::spectrum::HyperParams;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Budget {
    pub max_iter: usize,
    pub grad_tol: f64,
}

/// Parameters shared by every registered optimizer.
///
/// `inna_vanishing` reads `hp.alpha` as the numerator `c` of `α(t) = c/t`;
/// `gd` reads only `hp.gamma`; `din` integrates with `h = γ` up to
/// `t = max_iter · γ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlgoParams {
    pub hp: HyperParams,
    pub alpha_cap: f64,
}

impl From<HyperParams> for AlgoParams {
    fn from(hp: HyperParams) -> Self {
        Self { hp, alpha_cap: DEFAULT_ALPHA_CAP }
    }
}

pub trait Optimizer: Send + Sync {
    fn name(&self) -> &'static str;

    fn run(&self, landscape: &dyn Landscape, s0: &PhaseState, budget: Budget) -> Result<Trajectory>;
}

struct Inna(HyperParams);

impl Optimizer for Inna {
    fn name(&self) -> &'static str {
        "inna"
    }
    fn run(&self, landscape: &dyn Landscape, s0: &PhaseState, b: Budget) -> Result<Trajectory> {
        inna_run(landscape, s0, &self.0, b.max_iter, b.grad_tol)
    }
}

struct Din(HyperParams);

impl Optimizer for Din {
    fn name(&self) -> &'static str {
        "din"
    }
    fn run(&self, landscape: &dyn Landscape, s0: &PhaseState, b: Budget) -> Result<Trajectory> {
        let hp = self.0;
        din_integrate(landscape, s0, hp.alpha, hp.beta, hp.gamma, b.max_iter as f64 * hp.gamma, b.grad_tol)
    }
}

struct Gd(f64);

impl Optimizer for Gd {
    fn name(&self) -> &'static str {
        "gd"
    }
    fn run(&self, landscape: &dyn Landscape, s0: &PhaseState, b: Budget) -> Result<Trajectory> {
        gd_run(landscape, &s0.theta, self.0, b.max_iter, b.grad_tol)
    }
}

struct InnaVanishing(AlgoParams);

impl Optimizer for InnaVanishing {
    fn name(&self) -> &'static str {
        "inna_vanishing"
    }
    fn run(&self, landscape: &dyn Landscape, s0: &PhaseState, b: Budget) -> Result<Trajectory> {
        let AlgoParams { hp, alpha_cap } = self.0;
        inna_run_vanishing(landscape, s0, hp.beta, hp.alpha, hp.gamma, b.max_iter, b.grad_tol, alpha_cap)
    }
}

type Factory = fn(&AlgoParams) -> Box<dyn Optimizer>;

const REGISTRY: [(&str, Factory); 4] = [
    ("inna", |p| Box::new(Inna(p.hp))),
    ("din", |p| Box::new(Din(p.hp))),
    ("gd", |p| Box::new(Gd(p.hp.gamma))),
    ("inna_vanishing", |p| Box::new(InnaVanishing(*p))),
];

pub const ALGORITHMS: [&str; 4] = ["inna", "din", "gd", "inna_vanishing"];

pub fn optimizer(name: &str, params: &AlgoParams) -> Result<Box<dyn Optimizer>> {
    params.hp.validate()?;
    REGISTRY
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, make)| make(params))
        .ok_or_else(|| Error::UnknownAlgorithm(name.to_string(), ALGORITHMS.join(", ")))
}
