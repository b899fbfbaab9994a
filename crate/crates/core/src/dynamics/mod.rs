//! DIN flow, the INNA iteration, a gradient-descent baseline and the
//! Lyapunov energy that certifies INNA's descent.
//!
//! Everything here works on a [`PhaseState`] `(θ, ψ)`, where `ψ` is the
//! auxiliary variable that makes the dynamics Hessian-free.

mod registry;
mod run;

use nalgebra::DVector;
use serde::Serialize;

use crate::landscape::Landscape;
use crate::spectrum::{gamma_convergence_bound, gamma_diffeo_bound, HyperParams};
use crate::{Error, Result};

pub use registry::{optimizer, AlgoParams, Budget, Optimizer, ALGORITHMS};
pub use run::{din_integrate, gd_run, inna_run, inna_run_vanishing};

/// `‖θ‖` beyond which a run is declared diverged.
pub const DIVERGENCE_NORM: f64 = 1e8;
pub const DEFAULT_GRAD_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_ITER: usize = 1_000_000;
/// Cap on the vanishing damping `c / t`, which is singular at `t = 0`.
pub const DEFAULT_ALPHA_CAP: f64 = 1e3;

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseState {
    pub theta: DVector<f64>,
    pub psi: DVector<f64>,
}

impl PhaseState {
    pub fn new(theta: DVector<f64>, psi: DVector<f64>) -> Result<Self> {
        if theta.len() != psi.len() {
            return Err(Error::DimensionMismatch { expected: theta.len(), got: psi.len() });
        }
        Ok(Self { theta, psi })
    }

    /// `ψ = (1 − αβ)θ`: zero coupling residual.
    pub fn on_manifold(theta: DVector<f64>, alpha: f64, beta: f64) -> Self {
        let psi = &theta * (1.0 - alpha * beta);
        Self { theta, psi }
    }

    pub fn dim(&self) -> usize {
        self.theta.len()
    }

    fn is_diverged(&self) -> bool {
        !self.theta.iter().chain(self.psi.iter()).all(|x| x.is_finite()) || self.theta.norm() > DIVERGENCE_NORM
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Termination {
    GradTol,
    MaxIter,
    Diverged,
}

/// A recorded run. Every per-step sequence has `step_count + 1` entries;
/// a diverging step is not recorded.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub states: Vec<PhaseState>,
    pub losses: Vec<f64>,
    pub grad_norms: Vec<f64>,
    pub lyapunov: Vec<f64>,
    pub coupling_residuals: Vec<f64>,
    pub step_count: usize,
    pub terminated_by: Termination,
}

impl Trajectory {
    fn with_capacity(n: usize) -> Self {
        Self {
            states: Vec::with_capacity(n),
            losses: Vec::with_capacity(n),
            grad_norms: Vec::with_capacity(n),
            lyapunov: Vec::with_capacity(n),
            coupling_residuals: Vec::with_capacity(n),
            step_count: 0,
            terminated_by: Termination::MaxIter,
        }
    }

    fn push(&mut self, s: PhaseState, loss: f64, grad_norm: f64, lyapunov: f64, coupling: f64) {
        self.states.push(s);
        self.losses.push(loss);
        self.grad_norms.push(grad_norm);
        self.lyapunov.push(lyapunov);
        self.coupling_residuals.push(coupling);
        self.step_count = self.states.len() - 1;
    }

    pub fn last(&self) -> &PhaseState {
        self.states.last().expect("trajectory always holds its initial state")
    }

    pub fn final_theta(&self) -> &DVector<f64> {
        &self.last().theta
    }

    /// Number of sign changes of `θ_coord` along the run.
    pub fn sign_changes(&self, coord: usize) -> usize {
        sign_changes(self.states.iter().map(|s| s.theta[coord]))
    }
}

/// Strict sign changes in a sequence; exact zeros are skipped.
pub fn sign_changes(xs: impl IntoIterator<Item = f64>) -> usize {
    let mut prev = 0.0f64;
    let mut count = 0;
    for x in xs {
        if x == 0.0 {
            continue;
        }
        if prev != 0.0 && (x > 0.0) != (prev > 0.0) {
            count += 1;
        }
        prev = x;
    }
    count
}

/// Distance of `(θ, ψ)` from the stationary set `S`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StationarityResidual {
    /// `‖∇J(θ)‖`
    pub grad_norm: f64,
    /// `‖ψ − (1 − αβ)θ‖`
    pub coupling_residual: f64,
}

impl StationarityResidual {
    pub fn within(&self, tol: f64) -> bool {
        self.grad_norm <= tol && self.coupling_residual <= tol
    }
}

pub fn coupling_residual(s: &PhaseState, alpha: f64, beta: f64) -> f64 {
    (&s.psi - &s.theta * (1.0 - alpha * beta)).norm()
}

pub fn stationarity_residual<L: Landscape + ?Sized>(landscape: &L, s: &PhaseState, alpha: f64, beta: f64) -> StationarityResidual {
    StationarityResidual {
        grad_norm: landscape.gradient(&s.theta).norm(),
        coupling_residual: coupling_residual(s, alpha, beta),
    }
}

/// Right-hand side of the first-order DIN system.
pub fn din_field<L: Landscape + ?Sized>(landscape: &L, s: &PhaseState, alpha: f64, beta: f64) -> PhaseState {
    din_field_with_grad(&landscape.gradient(&s.theta), s, alpha, beta)
}

fn din_field_with_grad(grad: &DVector<f64>, s: &PhaseState, alpha: f64, beta: f64) -> PhaseState {
    let a = alpha - 1.0 / beta;
    let inv_b = 1.0 / beta;
    let common = &s.theta * (-a) - &s.psi * inv_b;
    PhaseState {
        theta: &common - grad * beta,
        psi: common,
    }
}

/// One INNA iteration: explicit Euler on [`din_field`] with step `γ`.
pub fn inna_step<L: Landscape + ?Sized>(landscape: &L, s: &PhaseState, hp: &HyperParams) -> PhaseState {
    euler(s, &din_field(landscape, s, hp.alpha, hp.beta), hp.gamma)
}

fn euler(s: &PhaseState, field: &PhaseState, gamma: f64) -> PhaseState {
    PhaseState {
        theta: &s.theta + &field.theta * gamma,
        psi: &s.psi + &field.psi * gamma,
    }
}

/// `E = μ J(θ) + ½‖(α − 1/β)θ + ψ/β‖²` with `μ = 1 + αβ − γα`.
pub fn lyapunov_energy<L: Landscape + ?Sized>(landscape: &L, s: &PhaseState, hp: &HyperParams) -> f64 {
    lyapunov_from_loss(landscape.value(&s.theta), s, hp)
}

fn lyapunov_from_loss(loss: f64, s: &PhaseState, hp: &HyperParams) -> f64 {
    let w = &s.theta * (hp.alpha - 1.0 / hp.beta) + &s.psi / hp.beta;
    hp.mu() * loss + 0.5 * w.norm_squared()
}

/// Constants `(C1, C2)` of the summed descent inequality
/// `C1 Σ‖Δθ_k‖² + C2 Σ‖∇J(θ_k)‖² ≤ E_0 − E_K`.
///
/// Rejected unless `γ` is below the convergence bound for `lipschitz`.
pub fn lyapunov_constants(hp: &HyperParams, lipschitz: f64) -> Result<(f64, f64)> {
    hp.validate()?;
    let bound = gamma_convergence_bound(hp.alpha, hp.beta, lipschitz)?;
    if hp.gamma >= bound {
        return Err(Error::invalid(format!(
            "gamma {} is not below the convergence bound {bound} for L = {lipschitz}",
            hp.gamma
        )));
    }
    let (a, b, g) = (hp.alpha, hp.beta, hp.gamma);
    let c1 = -(hp.mu() * lipschitz / 2.0 + a * a / 2.0 - a / g);
    let c2 = -(g * g / 2.0 - g * b);
    Ok((c1, c2))
}

/// Human-readable warnings when `γ` exceeds the sufficient step-size
/// conditions. The run itself is not affected.
pub fn step_size_warnings(hp: &HyperParams, lipschitz: Option<f64>) -> Vec<String> {
    let Some(l) = lipschitz else {
        return vec!["landscape declares no gradient Lipschitz constant; step-size bounds not checked".into()];
    };
    let mut out = Vec::new();
    if hp.alpha > 0.0 {
        if let Ok(bound) = gamma_convergence_bound(hp.alpha, hp.beta, l) {
            if hp.gamma >= bound {
                out.push(format!("gamma {} >= convergence bound {bound:.6} (L = {l}); convergence not guaranteed", hp.gamma));
            }
        }
    }
    if let Ok(bound) = gamma_diffeo_bound(hp.alpha, hp.beta, l) {
        if hp.gamma >= bound {
            out.push(format!("gamma {} >= diffeomorphism bound {bound:.6} (L = {l}); saddle avoidance not guaranteed", hp.gamma));
        }
    }
    out
}
