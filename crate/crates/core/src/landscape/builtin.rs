//! Built-in test functions.

use nalgebra::{DMatrix, DVector};

use super::Landscape;
use crate::{Error, Result};

pub const BUILTIN_NAMES: [&str; 5] = ["quad2", "doublewell", "fig1_min", "fig1_monkey", "diag_quadratic"];

/// Looks up a built-in landscape by name.
///
/// `diag_quadratic` takes its eigenvalues inline, either as
/// `diag_quadratic(1,2,3)` or `diag_quadratic:1,2,3`.
pub fn builtin(name: &str) -> Result<Box<dyn Landscape>> {
    let name = name.trim();
    match name {
        "quad2" => return Ok(Box::new(Quad2)),
        "doublewell" => return Ok(Box::new(DoubleWell)),
        "fig1_min" => return Ok(Box::new(Fig1Min)),
        "fig1_monkey" => return Ok(Box::new(Fig1Monkey)),
        _ => {}
    }
    let args = name
        .strip_prefix("diag_quadratic")
        .and_then(|rest| {
            rest.strip_prefix(':')
                .or_else(|| rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')))
        })
        .ok_or_else(|| Error::UnknownLandscape(name.to_string()))?;
    let lambdas = args
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|_| Error::UnknownLandscape(name.to_string()))?;
    Ok(Box::new(DiagQuadratic::new(lambdas)?))
}

fn v2(a: f64, b: f64) -> DVector<f64> {
    DVector::from_vec(vec![a, b])
}

fn m2(a: f64, b: f64, c: f64, d: f64) -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 2, &[a, b, c, d])
}

/// `θ1² + 2θ2²`, the spiral-regime example.
#[derive(Debug, Clone, Copy, Default)]
pub struct Quad2;

impl Landscape for Quad2 {
    fn name(&self) -> String {
        "quad2".into()
    }
    fn dim(&self) -> usize {
        2
    }
    fn value(&self, t: &DVector<f64>) -> f64 {
        t[0] * t[0] + 2.0 * t[1] * t[1]
    }
    fn gradient(&self, t: &DVector<f64>) -> DVector<f64> {
        v2(2.0 * t[0], 4.0 * t[1])
    }
    fn hessian(&self, _t: &DVector<f64>) -> DMatrix<f64> {
        m2(2.0, 0.0, 0.0, 4.0)
    }
    fn lipschitz_grad(&self) -> Option<f64> {
        Some(4.0)
    }
}

/// `θ1⁴ − 4θ1² + θ2²`: minimizers at `(±√2, 0)`, strict saddle at the origin.
///
/// The gradient is not globally Lipschitz. The declared constant 100 is
/// `max(|12θ1² − 8|, 2)` over the box `[-3, 3]²`, which contains every
/// experiment run on this function.
#[derive(Debug, Clone, Copy, Default)]
pub struct DoubleWell;

impl DoubleWell {
    pub const LIPSCHITZ_BOX: f64 = 3.0;
}

impl Landscape for DoubleWell {
    fn name(&self) -> String {
        "doublewell".into()
    }
    fn dim(&self) -> usize {
        2
    }
    fn value(&self, t: &DVector<f64>) -> f64 {
        let x2 = t[0] * t[0];
        x2 * x2 - 4.0 * x2 + t[1] * t[1]
    }
    fn gradient(&self, t: &DVector<f64>) -> DVector<f64> {
        let x = t[0];
        v2(4.0 * x * x * x - 8.0 * x, 2.0 * t[1])
    }
    fn hessian(&self, t: &DVector<f64>) -> DMatrix<f64> {
        m2(12.0 * t[0] * t[0] - 8.0, 0.0, 0.0, 2.0)
    }
    fn lipschitz_grad(&self) -> Option<f64> {
        let b = Self::LIPSCHITZ_BOX;
        Some((12.0 * b * b - 8.0).max(2.0))
    }
}

/// `½θ1² + ½θ2² + θ1θ2`: a degenerate convex minimum along `θ1 = −θ2`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Fig1Min;

impl Landscape for Fig1Min {
    fn name(&self) -> String {
        "fig1_min".into()
    }
    fn dim(&self) -> usize {
        2
    }
    fn value(&self, t: &DVector<f64>) -> f64 {
        0.5 * t[0] * t[0] + 0.5 * t[1] * t[1] + t[0] * t[1]
    }
    fn gradient(&self, t: &DVector<f64>) -> DVector<f64> {
        v2(t[0] + t[1], t[0] + t[1])
    }
    fn hessian(&self, _t: &DVector<f64>) -> DMatrix<f64> {
        m2(1.0, 1.0, 1.0, 1.0)
    }
    fn lipschitz_grad(&self) -> Option<f64> {
        Some(2.0)
    }
}

/// `θ1³ + θ2²`: a non-strict saddle at the origin (Hessian eigenvalues 0 and 2).
#[derive(Debug, Clone, Copy, Default)]
pub struct Fig1Monkey;

impl Landscape for Fig1Monkey {
    fn name(&self) -> String {
        "fig1_monkey".into()
    }
    fn dim(&self) -> usize {
        2
    }
    fn value(&self, t: &DVector<f64>) -> f64 {
        t[0] * t[0] * t[0] + t[1] * t[1]
    }
    fn gradient(&self, t: &DVector<f64>) -> DVector<f64> {
        v2(3.0 * t[0] * t[0], 2.0 * t[1])
    }
    fn hessian(&self, t: &DVector<f64>) -> DMatrix<f64> {
        m2(6.0 * t[0], 0.0, 0.0, 2.0)
    }
}

/// `½ Σ λ_i θ_i²`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagQuadratic {
    lambdas: Vec<f64>,
}

impl DiagQuadratic {
    pub fn new(lambdas: Vec<f64>) -> Result<Self> {
        if lambdas.is_empty() {
            return Err(Error::invalid("diag_quadratic needs at least one eigenvalue"));
        }
        if lambdas.iter().any(|l| !l.is_finite()) {
            return Err(Error::invalid("diag_quadratic eigenvalues must be finite"));
        }
        Ok(Self { lambdas })
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }
}

impl Landscape for DiagQuadratic {
    fn name(&self) -> String {
        let parts: Vec<String> = self.lambdas.iter().map(|l| l.to_string()).collect();
        format!("diag_quadratic({})", parts.join(","))
    }
    fn dim(&self) -> usize {
        self.lambdas.len()
    }
    fn value(&self, t: &DVector<f64>) -> f64 {
        0.5 * self.lambdas.iter().zip(t.iter()).map(|(l, x)| l * x * x).sum::<f64>()
    }
    fn gradient(&self, t: &DVector<f64>) -> DVector<f64> {
        DVector::from_iterator(t.len(), self.lambdas.iter().zip(t.iter()).map(|(l, x)| l * x))
    }
    fn hessian(&self, _t: &DVector<f64>) -> DMatrix<f64> {
        DMatrix::from_diagonal(&DVector::from_column_slice(&self.lambdas))
    }
    fn lipschitz_grad(&self) -> Option<f64> {
        Some(self.lambdas.iter().fold(0.0_f64, |m, l| m.max(l.abs())))
    }
}
