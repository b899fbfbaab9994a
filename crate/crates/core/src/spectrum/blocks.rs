use nalgebra::Complex;
use serde::{Serialize, Serializer};

use super::HyperParams;
use crate::{Error, Result};

fn complex_pair<S: Serializer>(z: &Complex<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

fn complex_pairs<S: Serializer>(zs: &[Complex<f64>; 2], s: S) -> std::result::Result<S::Ok, S::Error> {
    [[zs[0].re, zs[0].im], [zs[1].re, zs[1].im]].serialize(s)
}

/// `Δ = (α + βλ)² − 4λ`, shared (up to `γ²`) by the continuous and discrete blocks.
pub fn discriminant(alpha: f64, beta: f64, lambda: f64) -> f64 {
    let b = alpha + beta * lambda;
    b * b - 4.0 * lambda
}

/// Eigenvalue range on which the 2x2 blocks have complex eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpiralInterval {
    Empty,
    Closed { lo: f64, hi: f64 },
}

impl SpiralInterval {
    pub fn is_nonempty(&self) -> bool {
        matches!(self, SpiralInterval::Closed { .. })
    }

    pub fn bounds(&self) -> Option<(f64, f64)> {
        match *self {
            SpiralInterval::Empty => None,
            SpiralInterval::Closed { lo, hi } => Some((lo, hi)),
        }
    }

    pub fn contains(&self, lambda: f64) -> bool {
        self.bounds().is_some_and(|(lo, hi)| lo <= lambda && lambda <= hi)
    }
}

/// Closed interval `[(2 − αβ)/β² ∓ 2√(1 − αβ)/β²]`, empty when `αβ > 1`.
///
/// Evaluated as `α²/(1 + s)²` and `(1 + s)²/β²` with `s = √(1 − αβ)`,
/// which are the same endpoints without the cancellation in the lower one.
pub fn spiral_interval(alpha: f64, beta: f64) -> SpiralInterval {
    let x = alpha * beta;
    if x > 1.0 {
        return SpiralInterval::Empty;
    }
    let one_plus_s = 1.0 + (1.0 - x).sqrt();
    let lo = (alpha / one_plus_s).powi(2);
    let hi = (one_plus_s / beta).powi(2);
    SpiralInterval::Closed { lo, hi }
}

/// Returns `Δ` together with the interval-membership test; `Δ ≤ 0` exactly
/// when the membership test holds (up to rounding at the endpoints).
pub fn discriminant_sign(alpha: f64, beta: f64, lambda: f64) -> (f64, bool) {
    (discriminant(alpha, beta, lambda), spiral_interval(alpha, beta).contains(lambda))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    RealNodes,
    ComplexSpiral,
}

/// Eigenvalues of one continuous-time block: roots of `X² + (α + βλ)X + λ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlockSpectrum {
    pub lambda: f64,
    pub discriminant: f64,
    #[serde(serialize_with = "complex_pair")]
    pub sigma_plus: Complex<f64>,
    #[serde(serialize_with = "complex_pair")]
    pub sigma_minus: Complex<f64>,
    pub regime: Regime,
    pub omega: f64,
}

impl BlockSpectrum {
    /// Number of eigenvalues with real part above `tol`.
    pub fn unstable_count(&self, tol: f64) -> usize {
        [self.sigma_plus, self.sigma_minus].iter().filter(|z| z.re > tol).count()
    }
}

/// Real roots of `X² + bX + c` given `disc = b² − 4c ≥ 0`, larger first.
fn real_roots(b: f64, c: f64, disc: f64) -> (f64, f64) {
    let q = -0.5 * (b + disc.sqrt().copysign(b));
    if q == 0.0 {
        return (0.0, 0.0);
    }
    let (r1, r2) = (q, c / q);
    if r1 >= r2 {
        (r1, r2)
    } else {
        (r2, r1)
    }
}

pub fn din_block_eigs(alpha: f64, beta: f64, lambda: f64) -> BlockSpectrum {
    let b = alpha + beta * lambda;
    let disc = discriminant(alpha, beta, lambda);
    if disc >= 0.0 {
        let (hi, lo) = real_roots(b, lambda, disc);
        BlockSpectrum {
            lambda,
            discriminant: disc,
            sigma_plus: Complex::new(hi, 0.0),
            sigma_minus: Complex::new(lo, 0.0),
            regime: Regime::RealNodes,
            omega: 0.0,
        }
    } else {
        let omega = (-disc).sqrt() / 2.0;
        let re = -b / 2.0;
        BlockSpectrum {
            lambda,
            discriminant: disc,
            sigma_plus: Complex::new(re, omega),
            sigma_minus: Complex::new(re, -omega),
            regime: Regime::ComplexSpiral,
            omega,
        }
    }
}

/// Oscillation frequency `√(4λ − (α + βλ)²) / 2` in the spiral regime.
pub fn spiral_frequency(alpha: f64, beta: f64, lambda: f64) -> Result<f64> {
    let disc = discriminant(alpha, beta, lambda);
    if disc >= 0.0 {
        return Err(Error::RealRegime { discriminant: disc });
    }
    Ok((-disc).sqrt() / 2.0)
}

/// Eigenvalues of one block of the INNA Jacobian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiscreteBlockSpectrum {
    pub lambda: f64,
    #[serde(serialize_with = "complex_pairs")]
    pub eigenvalues: [Complex<f64>; 2],
    pub magnitudes: [f64; 2],
    /// `1 − γ(α + βλ) + γ²λ`.
    pub determinant: f64,
    pub stable: bool,
}

impl DiscreteBlockSpectrum {
    pub fn max_magnitude(&self) -> f64 {
        self.magnitudes[0].max(self.magnitudes[1])
    }

    pub fn trace(&self) -> f64 {
        (self.eigenvalues[0] + self.eigenvalues[1]).re
    }

    /// Number of eigenvalues with magnitude above `1 + tol`.
    pub fn unstable_count(&self, tol: f64) -> usize {
        self.magnitudes.iter().filter(|&&m| m > 1.0 + tol).count()
    }
}

/// Roots of `X² − (2 − γ(α + βλ))X + 1 − γ(α + βλ) + γ²λ`.
pub fn inna_block_eigs(hp: &HyperParams, lambda: f64) -> DiscreteBlockSpectrum {
    let HyperParams { alpha, beta, gamma } = *hp;
    let b = alpha + beta * lambda;
    let trace = 2.0 - gamma * b;
    let det = 1.0 - gamma * b + gamma * gamma * lambda;
    let disc = discriminant(alpha, beta, lambda);
    let eigenvalues = if disc >= 0.0 {
        let (hi, lo) = real_roots(-trace, det, gamma * gamma * disc);
        [Complex::new(hi, 0.0), Complex::new(lo, 0.0)]
    } else {
        let im = gamma * (-disc).sqrt() / 2.0;
        [Complex::new(trace / 2.0, im), Complex::new(trace / 2.0, -im)]
    };
    let magnitudes = [eigenvalues[0].norm(), eigenvalues[1].norm()];
    DiscreteBlockSpectrum {
        lambda,
        eigenvalues,
        magnitudes,
        determinant: det,
        stable: magnitudes[0] < 1.0 && magnitudes[1] < 1.0,
    }
}
