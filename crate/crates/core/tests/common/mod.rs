//! Oracles shared by the integration and acceptance tests.
#![allow(dead_code)]

use inna_lab::landscape::{DiagQuadratic, Landscape};
use inna_lab::spectrum::{din_block_eigs, din_jacobian, discriminant, spiral_interval, SpiralInterval};
use nalgebra::{Complex, DVector};

/// Greedy nearest matching of two eigenvalue multisets; returns the largest
/// matched distance, or `None` if the sizes differ.
pub fn multiset_distance(mut dense: Vec<Complex<f64>>, expected: &[Complex<f64>]) -> Option<f64> {
    if dense.len() != expected.len() {
        return None;
    }
    let mut worst = 0.0f64;
    for z in expected {
        let (k, d) = dense
            .iter()
            .enumerate()
            .map(|(k, w)| (k, (w - z).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))?;
        worst = worst.max(d);
        dense.remove(k);
    }
    Some(worst)
}

/// Largest distance between the dense DIN-Jacobian spectrum of a diagonal
/// quadratic and the union of its 2x2 block spectra.
pub fn block_union_error(lambdas: &[f64], alpha: f64, beta: f64) -> f64 {
    let l = DiagQuadratic::new(lambdas.to_vec()).unwrap();
    let jac = din_jacobian(&l, &DVector::zeros(lambdas.len()), alpha, beta);
    let dense: Vec<_> = jac.complex_eigenvalues().iter().copied().collect();
    let expected: Vec<_> = lambdas
        .iter()
        .flat_map(|&lam| {
            let s = din_block_eigs(alpha, beta, lam);
            [s.sigma_plus, s.sigma_minus]
        })
        .collect();
    multiset_distance(dense, &expected).expect("sizes agree")
}

/// `0, step, 2 step, …` for `n` values, computed by multiplication.
pub fn grid(start: f64, step: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| start + step * i as f64)
}

/// Counts grid points where `Δ ≤ 0` disagrees with spiral-interval
/// membership, ignoring points within `tie_tol` of an interval endpoint.
/// Returns `(checked, violations)`.
pub fn spiral_grid_violations(tie_tol: f64) -> (usize, usize) {
    let lambdas: Vec<f64> = (0..412).map(|i| -10.0 + 410.0 * i as f64 / 411.0).collect();
    let mut checked = 0;
    let mut violations = 0;
    for alpha in grid(0.0, 0.1, 31) {
        for beta in grid(0.05, 0.05, 40) {
            let interval = spiral_interval(alpha, beta);
            for &lam in &lambdas {
                checked += 1;
                let negative = discriminant(alpha, beta, lam) <= 0.0;
                let inside = alpha * beta <= 1.0 && interval.contains(lam);
                if negative == inside {
                    continue;
                }
                let near_end = match interval {
                    SpiralInterval::Closed { lo, hi } => {
                        (lam - lo).abs() <= tie_tol * lo.abs().max(1.0) || (lam - hi).abs() <= tie_tol * hi.abs().max(1.0)
                    }
                    SpiralInterval::Empty => false,
                };
                if !near_end {
                    violations += 1;
                }
            }
        }
    }
    (checked, violations)
}

/// Landscape gradients against central differences of the value.
pub fn gradient_error<L: Landscape + ?Sized>(l: &L, theta: &DVector<f64>) -> f64 {
    let fd = inna_lab::landscape::fd_gradient(l, theta, 1e-6);
    (l.gradient(theta) - fd).amax()
}

pub fn hessian_error<L: Landscape + ?Sized>(l: &L, theta: &DVector<f64>) -> f64 {
    let fd = inna_lab::landscape::fd_hessian(l, theta, 1e-4);
    (l.hessian(theta) - fd).amax()
}

/// `E_0 − E_N − (C1 Σ‖θ_{k+1} − θ_k‖² + C2 Σ‖∇J(θ_k)‖²)` over a recorded
/// INNA trajectory; non-negative when the summed descent inequality holds.
pub fn summability_slack(traj: &inna_lab::dynamics::Trajectory, c1: f64, c2: f64) -> f64 {
    let n = traj.step_count;
    let steps: f64 = traj.states.windows(2).map(|w| (&w[1].theta - &w[0].theta).norm_squared()).sum();
    let grads: f64 = traj.grad_norms[..n].iter().map(|g| g * g).sum();
    traj.lyapunov[0] - traj.lyapunov[n] - (c1 * steps + c2 * grads)
}

/// Largest per-step increase of the recorded Lyapunov energy.
pub fn max_energy_increase(traj: &inna_lab::dynamics::Trajectory) -> f64 {
    traj.lyapunov.windows(2).map(|w| w[1] - w[0]).fold(f64::NEG_INFINITY, f64::max)
}

/// Builtins with a declared gradient Lipschitz constant.
pub fn lipschitz_builtins() -> Vec<Box<dyn Landscape>> {
    ["quad2", "doublewell", "fig1_min", "diag_quadratic(0.5,3,-1)"]
        .iter()
        .map(|n| inna_lab::landscape::builtin(n).unwrap())
        .collect()
}
