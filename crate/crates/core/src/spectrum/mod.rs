//! Block eigenvalue analysis of the linearized DIN flow and INNA map.
//!
//! At a point whose Hessian has eigenvalues `λ_1..λ_P`, both Jacobians are
//! similar to a block-diagonal matrix of 2x2 blocks, one per `λ_p`. Every
//! stability question therefore reduces to a quadratic per eigenvalue:
//!
//! * continuous: `X² + (α + βλ)X + λ`
//! * discrete:   `X² − (2 − γ(α + βλ))X + 1 − γ(α + βλ) + γ²λ`
//!
//! Both share the sign of `Δ = (α + βλ)² − 4λ`, negative exactly on the
//! spiral interval.

mod blocks;
mod bounds;
mod jacobian;
mod permutation;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use blocks::{
    din_block_eigs, discriminant, discriminant_sign, inna_block_eigs, spiral_frequency, spiral_interval,
    BlockSpectrum, DiscreteBlockSpectrum, Regime, SpiralInterval,
};
pub use bounds::{gamma_convergence_bound, gamma_diffeo_bound};
pub use jacobian::{
    block_diagonalize, classify_stationary, din_jacobian, inna_jacobian, is_block_diagonal, StationaryClass,
};
pub use permutation::{is_permutation_matrix, permutation_matrix};

/// Absolute tolerance on real parts and magnitudes in stability calls.
pub const STABILITY_TOL: f64 = 1e-9;

/// Damping pair `(α, β)` and step-size `γ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HyperParams {
    /// Viscous damping, `α ≥ 0`.
    pub alpha: f64,
    /// Hessian-driven (Newton) damping, `β > 0`.
    pub beta: f64,
    /// Step-size, `γ > 0`. Ignored by the continuous-time analysis.
    pub gamma: f64,
}

impl HyperParams {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        let hp = Self { alpha, beta, gamma };
        hp.validate()?;
        Ok(hp)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha >= 0.0) || !self.alpha.is_finite() {
            return Err(Error::invalid(format!("alpha must be finite and >= 0, got {}", self.alpha)));
        }
        if !(self.beta > 0.0) || !self.beta.is_finite() {
            return Err(Error::invalid(format!("beta must be finite and > 0, got {}", self.beta)));
        }
        if !(self.gamma > 0.0) || !self.gamma.is_finite() {
            return Err(Error::invalid(format!("gamma must be finite and > 0, got {}", self.gamma)));
        }
        Ok(())
    }

    /// `αβ`; the spiral regime exists only when this is at most one.
    pub fn damping_product(&self) -> f64 {
        self.alpha * self.beta
    }

    /// Coefficient `μ = 1 + αβ − γα` of the loss in the Lyapunov energy.
    pub fn mu(&self) -> f64 {
        1.0 + self.alpha * self.beta - self.gamma * self.alpha
    }
}
