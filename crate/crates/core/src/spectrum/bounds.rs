//! Step-size bounds for INNA.

use crate::{Error, Result};

fn check_positive(alpha: f64, beta: f64, lipschitz: f64) -> Result<()> {
    for (name, v) in [("alpha", alpha), ("beta", beta), ("lipschitz", lipschitz)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::invalid(format!("{name} must be finite and > 0, got {v}")));
        }
    }
    Ok(())
}

/// Largest step for which the INNA map is a local diffeomorphism:
/// `min(β/2 + α/2L − √((α + βL)² − 4L)/2L, β)`.
///
/// When `(α + βL)² − 4L < 0` (L inside the spiral interval) the
/// determinant of the blocks near `L` has no real root in `γ`, and the
/// binding constraints are `γ < β ≤ 1/α`; the bound is then `β`.
pub fn gamma_diffeo_bound(alpha: f64, beta: f64, lipschitz: f64) -> Result<f64> {
    check_positive(alpha, beta, lipschitz)?;
    let b = alpha + beta * lipschitz;
    let disc = b * b - 4.0 * lipschitz;
    if disc < 0.0 {
        return Ok(beta);
    }
    // (b − √disc)/2L rewritten as 2/(b + √disc).
    let root = 2.0 / (b + disc.sqrt());
    Ok(root.min(beta))
}

/// Largest step for which the Lyapunov energy decreases along INNA:
/// `min(2α/((1 + αβ)L + α²), 1/α + β, 2β)`.
pub fn gamma_convergence_bound(alpha: f64, beta: f64, lipschitz: f64) -> Result<f64> {
    check_positive(alpha, beta, lipschitz)?;
    let first = 2.0 * alpha / ((1.0 + alpha * beta) * lipschitz + alpha * alpha);
    Ok(first.min(1.0 / alpha + beta).min(2.0 * beta))
}
