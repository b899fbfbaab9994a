//! Loss landscapes: value, gradient, Hessian and a gradient-Lipschitz bound.

mod builtin;
mod classify;
mod fd;

use nalgebra::{DMatrix, DVector};

pub use builtin::{builtin, DiagQuadratic, DoubleWell, Fig1Min, Fig1Monkey, Quad2, BUILTIN_NAMES};
pub use classify::{classify_critical, symmetric_eigen_ascending, CriticalLabel, CriticalPointClass};
pub use fd::{fd_gradient, fd_hessian, DEFAULT_FD_STEP};

/// Default tolerance under which a Hessian eigenvalue is called zero.
pub const DEFAULT_ZERO_TOL: f64 = 1e-7;
/// Default gradient-norm tolerance for calling a point critical.
pub const DEFAULT_CRITICAL_TOL: f64 = 1e-6;

/// A twice-differentiable, lower-bounded loss on R^P.
///
/// Implementations must be pure: no interior mutability, so a single
/// landscape can be shared across Monte Carlo workers.
pub trait Landscape: Send + Sync {
    fn name(&self) -> String;

    fn dim(&self) -> usize;

    fn value(&self, theta: &DVector<f64>) -> f64;

    fn gradient(&self, theta: &DVector<f64>) -> DVector<f64>;

    /// Hessian at `theta`. Black-box landscapes fall back to central
    /// differences with step `1e-5 * max(1, |theta|)`.
    fn hessian(&self, theta: &DVector<f64>) -> DMatrix<f64> {
        let h = DEFAULT_FD_STEP * theta.norm().max(1.0);
        fd_hessian(self, theta, h)
    }

    /// Upper bound on the Lipschitz constant of the gradient, if known.
    fn lipschitz_grad(&self) -> Option<f64> {
        None
    }
}

/// User-supplied landscape from closures. Without a Hessian closure the
/// finite-difference default of [`Landscape::hessian`] is used.
pub struct FnLandscape<V, G>
where
    V: Fn(&DVector<f64>) -> f64 + Send + Sync,
    G: Fn(&DVector<f64>) -> DVector<f64> + Send + Sync,
{
    name: String,
    dim: usize,
    value: V,
    gradient: G,
    lipschitz: Option<f64>,
}

impl<V, G> FnLandscape<V, G>
where
    V: Fn(&DVector<f64>) -> f64 + Send + Sync,
    G: Fn(&DVector<f64>) -> DVector<f64> + Send + Sync,
{
    pub fn new(name: impl Into<String>, dim: usize, value: V, gradient: G) -> Self {
        Self {
            name: name.into(),
            dim,
            value,
            gradient,
            lipschitz: None,
        }
    }

    pub fn with_lipschitz(mut self, l: f64) -> Self {
        self.lipschitz = Some(l);
        self
    }
}

impl<V, G> Landscape for FnLandscape<V, G>
where
    V: Fn(&DVector<f64>) -> f64 + Send + Sync,
    G: Fn(&DVector<f64>) -> DVector<f64> + Send + Sync,
{
    fn name(&self) -> String {
        self.name.clone()
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, theta: &DVector<f64>) -> f64 {
        (self.value)(theta)
    }

    fn gradient(&self, theta: &DVector<f64>) -> DVector<f64> {
        (self.gradient)(theta)
    }

    fn lipschitz_grad(&self) -> Option<f64> {
        self.lipschitz
    }
}
