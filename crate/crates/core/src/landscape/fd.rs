//! Central finite-difference oracles for gradients and Hessians.

use nalgebra::{DMatrix, DVector};

use super::Landscape;

/// Default absolute finite-difference step.
pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// Central-difference gradient: `(J(θ + h e_i) - J(θ - h e_i)) / 2h` per coordinate.
pub fn fd_gradient<L: Landscape + ?Sized>(landscape: &L, theta: &DVector<f64>, h: f64) -> DVector<f64> {
    assert!(h > 0.0, "finite-difference step must be positive");
    let mut probe = theta.clone();
    DVector::from_fn(theta.len(), |i, _| {
        probe[i] = theta[i] + h;
        let fp = landscape.value(&probe);
        probe[i] = theta[i] - h;
        let fm = landscape.value(&probe);
        probe[i] = theta[i];
        (fp - fm) / (2.0 * h)
    })
}

/// Central second differences of the value, symmetrized as `(M + Mᵀ) / 2`.
pub fn fd_hessian<L: Landscape + ?Sized>(landscape: &L, theta: &DVector<f64>, h: f64) -> DMatrix<f64> {
    assert!(h > 0.0, "finite-difference step must be positive");
    let n = theta.len();
    let f0 = landscape.value(theta);
    let mut probe = theta.clone();
    let mut eval = |offsets: &[(usize, f64)]| {
        for &(i, d) in offsets {
            probe[i] += d;
        }
        let v = landscape.value(&probe);
        probe.copy_from(theta);
        v
    };

    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        let fp = eval(&[(i, h)]);
        let fm = eval(&[(i, -h)]);
        m[(i, i)] = (fp - 2.0 * f0 + fm) / (h * h);
        for j in (i + 1)..n {
            let fpp = eval(&[(i, h), (j, h)]);
            let fpm = eval(&[(i, h), (j, -h)]);
            let fmp = eval(&[(i, -h), (j, h)]);
            let fmm = eval(&[(i, -h), (j, -h)]);
            m[(i, j)] = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
            m[(j, i)] = (fpp - fmp - fpm + fmm) / (4.0 * h * h);
        }
    }
    (&m + m.transpose()) * 0.5
}
