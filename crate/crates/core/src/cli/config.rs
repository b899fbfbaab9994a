use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dynamics::{DEFAULT_ALPHA_CAP, DEFAULT_GRAD_TOL, DEFAULT_MAX_ITER};
use crate::spectrum::HyperParams;
use crate::{Error, Result};

/// Initial `ψ`: either explicit or `"auto"`, meaning `(1 − αβ)θ0`.
#[derive(Debug, Clone, PartialEq)]
pub enum Psi0 {
    Auto,
    Vector(Vec<f64>),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Psi0Repr {
    Keyword(String),
    Vector(Vec<f64>),
}

impl Serialize for Psi0 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Psi0::Auto => Psi0Repr::Keyword("auto".into()),
            Psi0::Vector(v) => Psi0Repr::Vector(v.clone()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Psi0 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match Psi0Repr::deserialize(d)? {
            Psi0Repr::Keyword(k) if k == "auto" => Ok(Psi0::Auto),
            Psi0Repr::Keyword(k) => Err(serde::de::Error::custom(format!("psi0 must be \"auto\" or a vector, got \"{k}\""))),
            Psi0Repr::Vector(v) => Ok(Psi0::Vector(v)),
        }
    }
}

/// A single run, as read from `--config` and overridden by flags.
/// Serializes to a canonical pretty-printed JSON document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub landscape: String,
    pub algorithm: String,
    pub hp: HyperParams,
    pub theta0: Vec<f64>,
    pub psi0: Psi0,
    pub max_iter: usize,
    pub grad_tol: f64,
    /// Cap on the damping of `inna_vanishing`.
    pub alpha_cap: f64,
    pub seed: u64,
    pub out_dir: String,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            landscape: "quad2".into(),
            algorithm: "inna".into(),
            hp: HyperParams { alpha: 2.0, beta: 0.1, gamma: 0.15 },
            theta0: vec![1.0, 1.0],
            psi0: Psi0::Auto,
            max_iter: DEFAULT_MAX_ITER,
            grad_tol: DEFAULT_GRAD_TOL,
            alpha_cap: DEFAULT_ALPHA_CAP,
            seed: 0,
            out_dir: "inna-lab-out".into(),
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|source| Error::Json { context: "run config".into(), source })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|source| Error::Json { context: path.display().to_string(), source })
    }

    pub fn to_canonical_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("config is always serializable");
        s.push('\n');
        s
    }

    pub fn psi0_vector(&self) -> Vec<f64> {
        match &self.psi0 {
            Psi0::Auto => self.theta0.iter().map(|t| (1.0 - self.hp.alpha * self.hp.beta) * t).collect(),
            Psi0::Vector(v) => v.clone(),
        }
    }
}
