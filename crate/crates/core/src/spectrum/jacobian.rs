use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::{din_block_eigs, inna_block_eigs, permutation_matrix, spiral_interval, HyperParams, STABILITY_TOL};
use crate::landscape::{symmetric_eigen_ascending, Landscape};
use crate::Result;

/// Jacobian of the DIN field at `θ⋆` (it does not depend on `ψ`):
///
/// ```text
/// [ −β∇²J − (α − 1/β) I    −(1/β) I ]
/// [ −(α − 1/β) I           −(1/β) I ]
/// ```
pub fn din_jacobian<L: Landscape + ?Sized>(landscape: &L, theta: &DVector<f64>, alpha: f64, beta: f64) -> DMatrix<f64> {
    let p = theta.len();
    let hess = landscape.hessian(theta);
    let a = alpha - 1.0 / beta;
    let inv_b = 1.0 / beta;
    let mut jac = DMatrix::zeros(2 * p, 2 * p);
    for i in 0..p {
        for j in 0..p {
            jac[(i, j)] = -beta * hess[(i, j)];
        }
        jac[(i, i)] -= a;
        jac[(i, p + i)] = -inv_b;
        jac[(p + i, i)] = -a;
        jac[(p + i, p + i)] = -inv_b;
    }
    jac
}

/// Jacobian of one INNA step, `I + γ · DG`.
pub fn inna_jacobian<L: Landscape + ?Sized>(landscape: &L, theta: &DVector<f64>, hp: &HyperParams) -> DMatrix<f64> {
    let n = 2 * theta.len();
    DMatrix::identity(n, n) + din_jacobian(landscape, theta, hp.alpha, hp.beta) * hp.gamma
}

/// `Uᵀ (V ⊕ V)ᵀ J (V ⊕ V) U` with `V` the ascending eigenbasis of `hessian`
/// and `U` from [`permutation_matrix`].
pub fn block_diagonalize(jacobian: &DMatrix<f64>, hessian: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let p = hessian.nrows();
    let (_, v) = symmetric_eigen_ascending(hessian);
    let mut w = DMatrix::zeros(2 * p, 2 * p);
    w.view_mut((0, 0), (p, p)).copy_from(&v);
    w.view_mut((p, p), (p, p)).copy_from(&v);
    let u = permutation_matrix(p)?;
    let wu = &w * &u;
    Ok(wu.transpose() * jacobian * wu)
}

/// All entries outside the consecutive 2x2 diagonal blocks are within `tol` of zero.
pub fn is_block_diagonal(m: &DMatrix<f64>, tol: f64) -> bool {
    (0..m.nrows()).all(|i| (0..m.ncols()).all(|j| i / 2 == j / 2 || m[(i, j)].abs() <= tol))
}

/// Stationarity and local stability of `(θ⋆, (1 − αβ)θ⋆)` for both dynamics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StationaryClass {
    pub in_s: bool,
    pub in_s_neg: bool,
    pub unstable_dim_continuous: usize,
    pub unstable_dim_discrete: usize,
    pub hessian_eigenvalues: Vec<f64>,
    /// Hessian eigenvalues lying in the spiral interval.
    pub spiral_eigenvalues: Vec<f64>,
}

pub fn classify_stationary<L: Landscape + ?Sized>(
    landscape: &L,
    theta: &DVector<f64>,
    hp: &HyperParams,
    tol: f64,
) -> StationaryClass {
    let grad_norm = landscape.gradient(theta).norm();
    let in_s = grad_norm <= tol;
    let (values, _) = symmetric_eigen_ascending(&landscape.hessian(theta));
    let eigenvalues: Vec<f64> = values.iter().copied().collect();
    let min = eigenvalues.first().copied().unwrap_or(0.0);
    let interval = spiral_interval(hp.alpha, hp.beta);
    StationaryClass {
        in_s,
        in_s_neg: in_s && min < -tol,
        unstable_dim_continuous: eigenvalues
            .iter()
            .map(|&l| din_block_eigs(hp.alpha, hp.beta, l).unstable_count(STABILITY_TOL))
            .sum(),
        unstable_dim_discrete: eigenvalues
            .iter()
            .map(|&l| inna_block_eigs(hp, l).unstable_count(STABILITY_TOL))
            .sum(),
        spiral_eigenvalues: eigenvalues.iter().copied().filter(|&l| interval.contains(l)).collect(),
        hessian_eigenvalues: eigenvalues,
    }
}
