use nalgebra::DVector;

use super::{coupling_residual, din_field, din_field_with_grad, euler, lyapunov_from_loss, PhaseState, Termination, Trajectory};
use crate::landscape::Landscape;
use crate::spectrum::HyperParams;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy)]
enum Scheme {
    Inna(HyperParams),
    Vanishing { beta: f64, c: f64, gamma: f64, alpha_cap: f64 },
    Gd { gamma: f64 },
}

impl Scheme {
    fn params_at(&self, k: usize) -> HyperParams {
        match *self {
            Scheme::Inna(hp) => hp,
            Scheme::Vanishing { beta, c, gamma, alpha_cap } => {
                let t = (k as f64 + 1.0) * gamma;
                HyperParams { alpha: alpha_cap.min(c / t), beta, gamma }
            }
            // Only γ is meaningful for gradient descent.
            Scheme::Gd { gamma } => HyperParams { alpha: 0.0, beta: 1.0, gamma },
        }
    }
}

/// Shared discrete loop: record state `k`, test the stopping rule, then
/// advance with the single gradient already evaluated for the record.
fn drive<L: Landscape + ?Sized>(landscape: &L, s0: PhaseState, scheme: Scheme, max_iter: usize, grad_tol: f64) -> Trajectory {
    let mut traj = Trajectory::with_capacity(max_iter.min(1 << 16) + 1);
    let mut s = s0;
    for k in 0.. {
        let hp = scheme.params_at(k);
        let grad = landscape.gradient(&s.theta);
        let loss = landscape.value(&s.theta);
        let grad_norm = grad.norm();
        let (coupling, energy) = match scheme {
            Scheme::Gd { .. } => (0.0, loss),
            _ => (coupling_residual(&s, hp.alpha, hp.beta), lyapunov_from_loss(loss, &s, &hp)),
        };
        let next = match scheme {
            Scheme::Gd { gamma } => {
                let theta = &s.theta - &grad * gamma;
                PhaseState { psi: theta.clone(), theta }
            }
            _ => euler(&s, &din_field_with_grad(&grad, &s, hp.alpha, hp.beta), hp.gamma),
        };
        traj.push(s, loss, grad_norm, energy, coupling);
        if grad_norm < grad_tol && coupling < grad_tol {
            traj.terminated_by = Termination::GradTol;
            break;
        }
        if k >= max_iter {
            traj.terminated_by = Termination::MaxIter;
            break;
        }
        if next.is_diverged() {
            traj.terminated_by = Termination::Diverged;
            break;
        }
        s = next;
    }
    traj
}

fn check_dims<L: Landscape + ?Sized>(landscape: &L, s0: &PhaseState) -> Result<()> {
    if s0.theta.len() != s0.psi.len() {
        return Err(Error::DimensionMismatch { expected: s0.theta.len(), got: s0.psi.len() });
    }
    if s0.dim() != landscape.dim() {
        return Err(Error::DimensionMismatch { expected: landscape.dim(), got: s0.dim() });
    }
    Ok(())
}

/// Iterates the INNA step until `‖∇J(θ_k)‖` and the coupling residual are
/// both below `grad_tol`, `max_iter` steps have been taken, or the state
/// diverges.
pub fn inna_run<L: Landscape + ?Sized>(
    landscape: &L,
    s0: &PhaseState,
    hp: &HyperParams,
    max_iter: usize,
    grad_tol: f64,
) -> Result<Trajectory> {
    hp.validate()?;
    check_dims(landscape, s0)?;
    Ok(drive(landscape, s0.clone(), Scheme::Inna(*hp), max_iter, grad_tol))
}

/// INNA with damping `α_k = min(α_cap, c / t_k)`, `t_k = (k + 1)γ`.
#[allow(clippy::too_many_arguments)]
pub fn inna_run_vanishing<L: Landscape + ?Sized>(
    landscape: &L,
    s0: &PhaseState,
    beta: f64,
    c: f64,
    gamma: f64,
    max_iter: usize,
    grad_tol: f64,
    alpha_cap: f64,
) -> Result<Trajectory> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::invalid(format!("vanishing damping numerator must be > 0, got {c}")));
    }
    if !(alpha_cap > 0.0) {
        return Err(Error::invalid(format!("alpha_cap must be > 0, got {alpha_cap}")));
    }
    HyperParams::new(0.0, beta, gamma)?;
    check_dims(landscape, s0)?;
    let scheme = Scheme::Vanishing { beta, c, gamma, alpha_cap };
    Ok(drive(landscape, s0.clone(), scheme, max_iter, grad_tol))
}

/// `θ_{k+1} = θ_k − γ∇J(θ_k)`. The recorded `ψ` mirrors `θ` and the
/// Lyapunov column holds the loss.
pub fn gd_run<L: Landscape + ?Sized>(
    landscape: &L,
    theta0: &DVector<f64>,
    gamma: f64,
    max_iter: usize,
    grad_tol: f64,
) -> Result<Trajectory> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::invalid(format!("gamma must be > 0, got {gamma}")));
    }
    let s0 = PhaseState { theta: theta0.clone(), psi: theta0.clone() };
    check_dims(landscape, &s0)?;
    Ok(drive(landscape, s0, Scheme::Gd { gamma }, max_iter, grad_tol))
}

/// Fixed-step classical RK4 on the DIN field over `[0, t_end]`.
///
/// Stops early once both stationarity residuals fall below `grad_tol`.
/// The Lyapunov column uses the energy with `γ = h`.
#[allow(clippy::too_many_arguments)]
pub fn din_integrate<L: Landscape + ?Sized>(
    landscape: &L,
    s0: &PhaseState,
    alpha: f64,
    beta: f64,
    h: f64,
    t_end: f64,
    grad_tol: f64,
) -> Result<Trajectory> {
    let hp = HyperParams::new(alpha, beta, h)?;
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::invalid(format!("t_end must be > 0, got {t_end}")));
    }
    check_dims(landscape, s0)?;
    let n_steps = (t_end / h - 1e-9).ceil().max(1.0) as usize;
    let mut traj = Trajectory::with_capacity(n_steps.min(1 << 16) + 1);
    let mut s = s0.clone();
    let field = |s: &PhaseState| din_field(landscape, s, alpha, beta);
    for k in 0.. {
        let grad_norm = landscape.gradient(&s.theta).norm();
        let loss = landscape.value(&s.theta);
        let coupling = coupling_residual(&s, alpha, beta);
        let energy = lyapunov_from_loss(loss, &s, &hp);
        let stop = grad_norm < grad_tol && coupling < grad_tol;
        let next = if stop || k >= n_steps {
            None
        } else {
            let k1 = field(&s);
            let k2 = field(&euler(&s, &k1, h / 2.0));
            let k3 = field(&euler(&s, &k2, h / 2.0));
            let k4 = field(&euler(&s, &k3, h));
            Some(PhaseState {
                theta: &s.theta + (&k1.theta + (&k2.theta + &k3.theta) * 2.0 + &k4.theta) * (h / 6.0),
                psi: &s.psi + (&k1.psi + (&k2.psi + &k3.psi) * 2.0 + &k4.psi) * (h / 6.0),
            })
        };
        traj.push(s, loss, grad_norm, energy, coupling);
        match next {
            None => {
                traj.terminated_by = if stop { Termination::GradTol } else { Termination::MaxIter };
                break;
            }
            Some(n) if n.is_diverged() => {
                traj.terminated_by = Termination::Diverged;
                break;
            }
            Some(n) => s = n,
        }
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{lyapunov_energy, stationarity_residual};
    use crate::landscape::builtin;

    fn v(xs: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(xs)
    }

    fn ones() -> PhaseState {
        PhaseState { theta: v(&[1.0, 1.0]), psi: v(&[1.0, 1.0]) }
    }

    fn assert_consistent(t: &Trajectory) {
        let n = t.step_count + 1;
        assert_eq!(t.states.len(), n);
        assert_eq!(t.losses.len(), n);
        assert_eq!(t.grad_norms.len(), n);
        assert_eq!(t.lyapunov.len(), n);
        assert_eq!(t.coupling_residuals.len(), n);
    }

    #[test]
    fn inna_quad2_converges_with_monotone_energy() {
        let q = builtin("quad2").unwrap();
        let hp = HyperParams::new(2.0, 0.1, 0.15).unwrap();
        let t = inna_run(q.as_ref(), &ones(), &hp, 1_000_000, 1e-8).unwrap();
        assert_consistent(&t);
        assert_eq!(t.terminated_by, Termination::GradTol);
        assert!(t.lyapunov.windows(2).all(|w| w[1] <= w[0] + 1e-12));
        let r = stationarity_residual(q.as_ref(), t.last(), 2.0, 0.1);
        assert!(r.grad_norm < 1e-8 && r.coupling_residual < 1e-8);
        for (s, &loss) in t.states.iter().zip(&t.losses) {
            assert_eq!(q.value(&s.theta), loss);
        }
        assert_eq!(t.lyapunov[0], lyapunov_energy(q.as_ref(), &t.states[0], &hp));
    }

    #[test]
    fn inna_doublewell_reaches_minimizer() {
        let dw = builtin("doublewell").unwrap();
        let hp = HyperParams::new(2.0, 0.1, 0.02).unwrap();
        let s0 = PhaseState::on_manifold(v(&[0.5, 0.5]), 2.0, 0.1);
        let t = inna_run(dw.as_ref(), &s0, &hp, 1_000_000, 1e-8).unwrap();
        assert_eq!(t.terminated_by, Termination::GradTol);
        assert!((t.final_theta() - v(&[2f64.sqrt(), 0.0])).norm() < 1e-6);
    }

    #[test]
    fn stationary_start_stops_at_zero() {
        let q = builtin("quad2").unwrap();
        let hp = HyperParams::new(2.0, 0.1, 0.15).unwrap();
        let s0 = PhaseState::on_manifold(v(&[0.0, 0.0]), 2.0, 0.1);
        let t = inna_run(q.as_ref(), &s0, &hp, 100, 1e-8).unwrap();
        assert_eq!((t.step_count, t.terminated_by), (0, Termination::GradTol));
        let t = din_integrate(q.as_ref(), &s0, 2.0, 0.1, 0.01, 1.0, 0.0).unwrap();
        assert!(t.states.iter().all(|s| *s == s0));
    }

    #[test]
    fn max_iter_and_divergence() {
        let q = builtin("quad2").unwrap();
        let hp = HyperParams::new(2.0, 0.1, 0.15).unwrap();
        let t = inna_run(q.as_ref(), &ones(), &hp, 5, 1e-8).unwrap();
        assert_eq!((t.step_count, t.terminated_by), (5, Termination::MaxIter));

        let t = gd_run(q.as_ref(), &v(&[1.0, 1.0]), 10.0, 10_000, 1e-8).unwrap();
        assert_eq!(t.terminated_by, Termination::Diverged);
        assert_consistent(&t);
        assert!(t.states.iter().all(|s| s.theta.norm() <= 1e8));
    }

    #[test]
    fn gd_examples() {
        let q = builtin("quad2").unwrap();
        let t = gd_run(q.as_ref(), &v(&[1.0, 1.0]), 0.1, 100_000, 1e-8).unwrap();
        assert_eq!(t.terminated_by, Termination::GradTol);
        assert!(t.losses.windows(2).all(|w| w[1] < w[0]));
        assert_eq!(t.lyapunov, t.losses);

        let dw = builtin("doublewell").unwrap();
        let t = gd_run(dw.as_ref(), &v(&[0.0, 1.0]), 0.3, 10_000, 1e-8).unwrap();
        assert!(t.states.iter().all(|s| s.theta[0] == 0.0));

        let t = gd_run(dw.as_ref(), &v(&[0.0, 0.0]), 0.3, 10, 1e-8).unwrap();
        assert_eq!(t.step_count, 0);
    }

    #[test]
    fn din_quad2_converges() {
        let q = builtin("quad2").unwrap();
        let t = din_integrate(q.as_ref(), &ones(), 2.0, 1.0, 1e-3, 50.0, 1e-6).unwrap();
        assert_eq!(t.terminated_by, Termination::GradTol);
        let r = stationarity_residual(q.as_ref(), t.last(), 2.0, 1.0);
        assert!(r.grad_norm < 1e-6 && r.coupling_residual < 1e-6);
        assert!(t.final_theta().norm() < 1e-6);
    }

    #[test]
    fn din_spirals_for_small_beta() {
        let q = builtin("quad2").unwrap();
        let t = din_integrate(q.as_ref(), &ones(), 2.0, 0.1, 1e-3, 50.0, 1e-10).unwrap();
        assert!(t.sign_changes(0) >= 3, "{} sign changes", t.sign_changes(0));
    }

    #[test]
    fn vanishing_damping_oscillates_more() {
        let q = builtin("quad2").unwrap();
        let gamma = 0.01;
        let n = 2000;
        let fixed = inna_run(q.as_ref(), &ones(), &HyperParams::new(2.0, 0.1, gamma).unwrap(), n, 0.0).unwrap();
        let van = inna_run_vanishing(q.as_ref(), &ones(), 0.1, 2.0, gamma, n, 0.0, 1e3).unwrap();
        let van_damped = inna_run_vanishing(q.as_ref(), &ones(), 1.0, 2.0, gamma, n, 0.0, 1e3).unwrap();
        assert!(van.sign_changes(0) > fixed.sign_changes(0));
        assert!(van_damped.sign_changes(0) < van.sign_changes(0));
    }

    #[test]
    fn vanishing_with_capped_alpha_matches_fixed() {
        let q = builtin("quad2").unwrap();
        let hp = HyperParams::new(2.0, 0.1, 0.05).unwrap();
        let fixed = inna_run(q.as_ref(), &ones(), &hp, 300, 1e-8).unwrap();
        let van = inna_run_vanishing(q.as_ref(), &ones(), 0.1, 1e12, 0.05, 300, 1e-8, 2.0).unwrap();
        assert_eq!(fixed.states, van.states);
    }

    #[test]
    fn rejects_bad_inputs() {
        let q = builtin("quad2").unwrap();
        let hp = HyperParams::new(2.0, 0.1, 0.05).unwrap();
        let wrong = PhaseState { theta: v(&[1.0]), psi: v(&[1.0]) };
        assert!(inna_run(q.as_ref(), &wrong, &hp, 10, 1e-8).is_err());
        assert!(inna_run_vanishing(q.as_ref(), &ones(), 0.1, 0.0, 0.1, 10, 1e-8, 1e3).is_err());
        assert!(din_integrate(q.as_ref(), &ones(), 2.0, 0.1, 0.0, 1.0, 1e-8).is_err());
        assert!(gd_run(q.as_ref(), &v(&[1.0, 1.0]), -1.0, 10, 1e-8).is_err());
    }
}
