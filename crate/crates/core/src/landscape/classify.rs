use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::Landscape;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CriticalLabel {
    LocalMin,
    StrictSaddle,
    NonStrictSaddle,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalPointClass {
    pub label: CriticalLabel,
    /// Hessian eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    pub zero_tolerance: f64,
}

impl CriticalPointClass {
    pub fn from_eigenvalues(mut eigenvalues: Vec<f64>, zero_tolerance: f64) -> Self {
        eigenvalues.sort_by(f64::total_cmp);
        let min = eigenvalues.first().copied().unwrap_or(0.0);
        let label = if min > zero_tolerance {
            CriticalLabel::LocalMin
        } else if min < -zero_tolerance {
            CriticalLabel::StrictSaddle
        } else {
            CriticalLabel::NonStrictSaddle
        };
        Self {
            label,
            eigenvalues,
            zero_tolerance,
        }
    }
}

/// Symmetric eigendecomposition with eigenvalues sorted ascending and the
/// eigenvector columns permuted to match.
pub fn symmetric_eigen_ascending(h: &DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let sym = (h + h.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

/// Classifies `theta` as a local minimum, strict saddle or non-strict saddle
/// from the signs of its Hessian eigenvalues.
///
/// Fails with [`Error::NotCritical`] when `|∇J(θ)| > critical_tol`.
pub fn classify_critical<L: Landscape + ?Sized>(
    landscape: &L,
    theta: &DVector<f64>,
    zero_tol: f64,
    critical_tol: f64,
) -> Result<CriticalPointClass> {
    let norm = landscape.gradient(theta).norm();
    if !(norm <= critical_tol) {
        return Err(Error::NotCritical {
            norm,
            tol: critical_tol,
        });
    }
    let (values, _) = symmetric_eigen_ascending(&landscape.hessian(theta));
    Ok(CriticalPointClass::from_eigenvalues(values.iter().copied().collect(), zero_tol))
}
