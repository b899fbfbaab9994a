use std::fmt::Write as _;

use nalgebra::DVector;
use serde::Serialize;

use crate::landscape::{classify_critical, CriticalPointClass, Landscape, DEFAULT_CRITICAL_TOL, DEFAULT_ZERO_TOL};
use crate::spectrum::{
    classify_stationary, din_block_eigs, gamma_convergence_bound, gamma_diffeo_bound, inna_block_eigs, spiral_interval, BlockSpectrum,
    DiscreteBlockSpectrum, HyperParams, SpiralInterval, StationaryClass,
};
use crate::Result;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenRegime {
    pub lambda: f64,
    pub in_spiral_interval: bool,
    pub continuous: BlockSpectrum,
    pub discrete: DiscreteBlockSpectrum,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegimeReport {
    pub landscape: String,
    pub theta: Vec<f64>,
    pub hp: HyperParams,
    pub critical: CriticalPointClass,
    pub stationary: StationaryClass,
    pub spiral_interval: SpiralInterval,
    pub eigen: Vec<EigenRegime>,
    pub lipschitz: Option<f64>,
    pub gamma_diffeo: Option<f64>,
    pub gamma_convergence: Option<f64>,
}

/// Everything known about the linearization at a critical point: Hessian
/// classification, stationarity, per-eigenvalue block spectra and the
/// step-size bounds for the landscape's Lipschitz constant (or `lipschitz`
/// when given).
pub fn run_regime_report<L: Landscape + ?Sized>(
    landscape: &L,
    theta: &DVector<f64>,
    hp: &HyperParams,
    lipschitz: Option<f64>,
) -> Result<RegimeReport> {
    hp.validate()?;
    let critical = classify_critical(landscape, theta, DEFAULT_ZERO_TOL, DEFAULT_CRITICAL_TOL)?;
    let stationary = classify_stationary(landscape, theta, hp, DEFAULT_CRITICAL_TOL);
    let interval = spiral_interval(hp.alpha, hp.beta);
    let eigen = critical
        .eigenvalues
        .iter()
        .map(|&lambda| EigenRegime {
            lambda,
            in_spiral_interval: interval.contains(lambda),
            continuous: din_block_eigs(hp.alpha, hp.beta, lambda),
            discrete: inna_block_eigs(hp, lambda),
        })
        .collect();
    let lipschitz = lipschitz.or_else(|| landscape.lipschitz_grad());
    let bound = |f: fn(f64, f64, f64) -> Result<f64>| lipschitz.and_then(|l| f(hp.alpha, hp.beta, l).ok());
    Ok(RegimeReport {
        landscape: landscape.name(),
        theta: theta.iter().copied().collect(),
        hp: *hp,
        critical,
        stationary,
        spiral_interval: interval,
        eigen,
        lipschitz,
        gamma_diffeo: bound(gamma_diffeo_bound),
        gamma_convergence: bound(gamma_convergence_bound),
    })
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "n/a".to_string(), |v| format!("{v:.6}"))
}

impl RegimeReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "landscape        {}", self.landscape);
        let _ = writeln!(s, "theta            {:?}", self.theta);
        let _ = writeln!(s, "alpha beta gamma {} {} {}", self.hp.alpha, self.hp.beta, self.hp.gamma);
        let _ = writeln!(s, "critical point   {:?}", self.critical.label);
        let _ = writeln!(
            s,
            "stationary       in_S={} in_S_neg={} unstable dims: continuous {} discrete {}",
            self.stationary.in_s, self.stationary.in_s_neg, self.stationary.unstable_dim_continuous, self.stationary.unstable_dim_discrete
        );
        let _ = match self.spiral_interval.bounds() {
            Some((lo, hi)) => writeln!(s, "spiral interval  [{lo:.6}, {hi:.6}]"),
            None => writeln!(s, "spiral interval  empty"),
        };
        for e in &self.eigen {
            let _ = writeln!(
                s,
                "  lambda {:>12.6}  {:?}  omega {:.6}  Re(sigma+) {:.6}  max|mu| {:.6}",
                e.lambda,
                e.continuous.regime,
                e.continuous.omega,
                e.continuous.sigma_plus.re,
                e.discrete.max_magnitude()
            );
        }
        let _ = writeln!(s, "lipschitz        {}", opt(self.lipschitz));
        let _ = writeln!(s, "gamma_diffeo     {}", opt(self.gamma_diffeo));
        let _ = writeln!(s, "gamma_convergence {}", opt(self.gamma_convergence));
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::landscape::{builtin, CriticalLabel};
    use crate::spectrum::Regime;
    use crate::Error;

    fn origin() -> DVector<f64> {
        DVector::zeros(2)
    }

    #[test]
    fn quad2_small_beta_spirals() {
        let q = builtin("quad2").unwrap();
        let r = run_regime_report(q.as_ref(), &origin(), &HyperParams::new(2.0, 0.1, 0.15).unwrap(), None).unwrap();
        assert!(r.eigen.iter().all(|e| e.continuous.regime == Regime::ComplexSpiral && e.in_spiral_interval));
        assert!((r.eigen[0].continuous.omega - 0.888819).abs() < 1e-6);
        assert!((r.eigen[1].continuous.omega - 1.6).abs() < 1e-12);
        assert_eq!(r.gamma_convergence, Some(0.2));
        assert!(r.to_text().contains("ComplexSpiral"));
    }

    #[test]
    fn quad2_large_beta_has_no_spirals() {
        let q = builtin("quad2").unwrap();
        let r = run_regime_report(q.as_ref(), &origin(), &HyperParams::new(2.0, 1.0, 0.1).unwrap(), None).unwrap();
        assert!(r.stationary.spiral_eigenvalues.is_empty());
        assert!(!r.spiral_interval.is_nonempty());
    }

    #[test]
    fn doublewell_saddle() {
        let dw = builtin("doublewell").unwrap();
        let r = run_regime_report(dw.as_ref(), &origin(), &HyperParams::new(2.0, 0.1, 0.02).unwrap(), None).unwrap();
        assert_eq!(r.critical.label, CriticalLabel::StrictSaddle);
        assert!(r.stationary.unstable_dim_continuous >= 1 && r.stationary.unstable_dim_discrete >= 1);
    }

    #[test]
    fn non_critical_point_propagates() {
        let q = builtin("quad2").unwrap();
        let err = run_regime_report(q.as_ref(), &DVector::from_vec(vec![1.0, 1.0]), &HyperParams::new(2.0, 0.1, 0.1).unwrap(), None);
        assert!(matches!(err, Err(Error::NotCritical { .. })));
    }
}
