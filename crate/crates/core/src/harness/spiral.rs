//! Spiral vs. no-spiral behaviour on `θ1² + 2θ2²`.

use std::path::Path;

use nalgebra::DVector;
use serde::Serialize;

use super::io::{emit_csv_with, emit_svg_lineplot, write_json, Series};
use crate::dynamics::{inna_run, inna_run_vanishing, sign_changes, PhaseState, Termination, Trajectory, DEFAULT_ALPHA_CAP, DEFAULT_GRAD_TOL};
use crate::landscape::Quad2;
use crate::spectrum::HyperParams;
use crate::Result;

/// `‖θ‖` below which oscillations are no longer counted.
pub const SPIRAL_COUNT_RADIUS: f64 = 1e-3;
pub const SPIRAL_MAX_ITER: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpiralConfig {
    pub label: String,
    /// With `vanishing`, `hp.alpha` is the numerator `c` of `α(t) = c/t`.
    pub hp: HyperParams,
    pub vanishing: bool,
}

impl SpiralConfig {
    pub fn fixed(label: &str, alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        Ok(Self { label: label.into(), hp: HyperParams::new(alpha, beta, gamma)?, vanishing: false })
    }

    pub fn vanishing(label: &str, c: f64, beta: f64, gamma: f64) -> Result<Self> {
        Ok(Self { label: label.into(), hp: HyperParams::new(c, beta, gamma)?, vanishing: true })
    }
}

/// The four runs of the spiral figure: `(2, 0.1)`, `(2, 1)`, `(2/t, 0.1)`
/// and `(2/t, 1)`. The fixed-damping runs use `γ = 0.15`, inside both
/// step bounds for `L = 4`; the vanishing runs use `γ = 0.05`, since the
/// convergence bound shrinks to zero with `α` and `γ = 0.15` diverges.
pub fn default_spiral_configs() -> Vec<SpiralConfig> {
    vec![
        SpiralConfig::fixed("a2_b0.1", 2.0, 0.1, 0.15).unwrap(),
        SpiralConfig::fixed("a2_b1", 2.0, 1.0, 0.15).unwrap(),
        SpiralConfig::vanishing("a2overt_b0.1", 2.0, 0.1, 0.05).unwrap(),
        SpiralConfig::vanishing("a2overt_b1", 2.0, 1.0, 0.05).unwrap(),
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpiralSummary {
    pub label: String,
    pub hp: HyperParams,
    pub vanishing: bool,
    /// Sign changes of `θ1` before `‖θ‖` first drops below [`SPIRAL_COUNT_RADIUS`].
    pub sign_changes: usize,
    pub sign_changes_total: usize,
    pub steps: usize,
    pub terminated_by: Termination,
    pub final_loss: f64,
    pub final_distance: f64,
    pub csv: Option<String>,
}

fn run_one(cfg: &SpiralConfig, theta0: &DVector<f64>) -> Result<Trajectory> {
    // Every coordinate of the initial phase state is set from θ0: ψ0 = θ0.
    let s0 = PhaseState::new(theta0.clone(), theta0.clone())?;
    if cfg.vanishing {
        inna_run_vanishing(&Quad2, &s0, cfg.hp.beta, cfg.hp.alpha, cfg.hp.gamma, SPIRAL_MAX_ITER, DEFAULT_GRAD_TOL, DEFAULT_ALPHA_CAP)
    } else {
        inna_run(&Quad2, &s0, &cfg.hp, SPIRAL_MAX_ITER, DEFAULT_GRAD_TOL)
    }
}

/// Runs each configuration from `(θ0, ψ0 = θ0)`. With `out_dir`, writes
/// `spiral_<label>.csv` (trajectory columns plus `distance`), path, loss
/// and distance plots, and `spiral_summary.json`.
pub fn run_spiral_experiment(configs: &[SpiralConfig], theta0: &DVector<f64>, out_dir: Option<&Path>) -> Result<Vec<SpiralSummary>> {
    let mut summaries = Vec::with_capacity(configs.len());
    let (mut paths, mut losses, mut distances) = (Vec::new(), Vec::new(), Vec::new());
    for cfg in configs {
        let traj = run_one(cfg, theta0)?;
        let dist: Vec<f64> = traj.states.iter().map(|s| s.theta.norm()).collect();
        let cut = dist.iter().position(|&d| d < SPIRAL_COUNT_RADIUS).unwrap_or(dist.len() - 1);
        let csv = match out_dir {
            Some(dir) => {
                let name = format!("spiral_{}.csv", cfg.label);
                emit_csv_with(&traj, &[("distance", &dist)], &dir.join(&name))?;
                Some(name)
            }
            None => None,
        };
        paths.push(Series::new(&cfg.label, traj.states.iter().map(|s| (s.theta[0], s.theta[1])).collect()));
        losses.push(Series::indexed(&cfg.label, traj.losses.iter().map(|l| l.log10())));
        distances.push(Series::indexed(&cfg.label, dist.iter().map(|d| d.log10())));
        summaries.push(SpiralSummary {
            label: cfg.label.clone(),
            hp: cfg.hp,
            vanishing: cfg.vanishing,
            sign_changes: sign_changes(traj.states[..=cut].iter().map(|s| s.theta[0])),
            sign_changes_total: traj.sign_changes(0),
            steps: traj.step_count,
            terminated_by: traj.terminated_by,
            final_loss: *traj.losses.last().expect("non-empty"),
            final_distance: *dist.last().expect("non-empty"),
            csv,
        });
    }
    if let Some(dir) = out_dir {
        emit_svg_lineplot(&paths, "INNA iterates on θ1² + 2θ2²", "θ1", "θ2", &dir.join("spiral_paths.svg"))?;
        emit_svg_lineplot(&losses, "Loss", "iteration", "log10 J(θ_k)", &dir.join("spiral_loss.svg"))?;
        emit_svg_lineplot(&distances, "Distance to the minimizer", "iteration", "log10 ‖θ_k‖", &dir.join("spiral_distance.svg"))?;
        write_json(&summaries, &dir.join("spiral_summary.json"))?;
    }
    Ok(summaries)
}
