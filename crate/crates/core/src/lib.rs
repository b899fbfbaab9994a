//! Inertial Newton dynamics for non-convex optimization.
//!
//! The crate is organised around five pieces:
//!
//! * [`landscape`]: loss functions with value/gradient/Hessian access, the
//!   built-in test functions, finite-difference oracles and critical-point
//!   classification.
//! * [`spectrum`]: the 2x2 block eigenvalue algebra of the linearized
//!   continuous flow (DIN) and of its explicit-Euler discretization (INNA),
//!   the spiral interval, the block-diagonalizing permutation and the
//!   step-size bounds.
//! * [`dynamics`]: the DIN vector field and RK4 integrator, the INNA
//!   iteration, gradient descent, the vanishing-damping variant and the
//!   Lyapunov energy monitor. Every algorithm implements [`dynamics::Optimizer`]
//!   and is registered by name in [`dynamics::registry`].
//! * [`harness`]: spiral-regime study, saddle-escape Monte Carlo, regime
//!   reports and CSV/SVG/JSON emitters.
//! * [`cli`]: the `inna-lab` command line front-end.

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod harness;
pub mod landscape;
pub mod spectrum;

pub use error::{Error, Result};
