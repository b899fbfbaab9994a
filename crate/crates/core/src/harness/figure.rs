//! Double-well trajectories started on and just off the saddle's stable
//! manifold.

use std::path::Path;

use nalgebra::DVector;
use serde::Serialize;

use super::io::{emit_csv, emit_svg_lineplot, write_json, Series};
use super::montecarlo::{classify_basin, Algorithm, Basin, InitMode, MonteCarloConfig};
use crate::dynamics::{inna_run, PhaseState, Termination, DEFAULT_GRAD_TOL};
use crate::landscape::DoubleWell;
use crate::spectrum::HyperParams;
use crate::Result;

pub const ON_MANIFOLD_START: [f64; 2] = [0.0, 2.0];
pub const OFF_MANIFOLD_START: [f64; 2] = [0.01, 2.0];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EscapeRun {
    pub label: String,
    pub hp: HyperParams,
    pub theta0: [f64; 2],
    pub final_theta: [f64; 2],
    pub basin: Basin,
    pub steps: usize,
    pub terminated_by: Termination,
    pub csv: Option<String>,
}

/// INNA from [`ON_MANIFOLD_START`] and [`OFF_MANIFOLD_START`] for the
/// damping pairs `(2, 0.1)` and `(2, 1)`, each at the Monte Carlo default
/// step. Writes `escape_<label>.csv`, `escape_paths.svg` and
/// `escape_summary.json` when `out_dir` is given.
pub fn run_escape_figure(out_dir: Option<&Path>) -> Result<Vec<EscapeRun>> {
    let mut runs = Vec::new();
    let mut series = Vec::new();
    for (a, b) in [(2.0, 0.1), (2.0, 1.0)] {
        let hp = MonteCarloConfig::with_defaults(Algorithm::Inna, (a, b), InitMode::OnManifold { range: 1.0 }, 1, 0)?.hp;
        for (side, start) in [("on", ON_MANIFOLD_START), ("off", OFF_MANIFOLD_START)] {
            let label = format!("a{a}_b{b}_{side}");
            let s0 = PhaseState::on_manifold(DVector::from_column_slice(&start), a, b);
            let traj = inna_run(&DoubleWell, &s0, &hp, MonteCarloConfig::DEFAULT_MAX_ITER * 4, DEFAULT_GRAD_TOL)?;
            let csv = match out_dir {
                Some(dir) => {
                    let name = format!("escape_{label}.csv");
                    emit_csv(&traj, &dir.join(&name))?;
                    Some(name)
                }
                None => None,
            };
            let end = traj.final_theta();
            series.push(Series::new(&label, traj.states.iter().map(|s| (s.theta[0], s.theta[1])).collect()));
            runs.push(EscapeRun {
                label,
                hp,
                theta0: start,
                final_theta: [end[0], end[1]],
                basin: classify_basin(end, MonteCarloConfig::DEFAULT_BASIN_TOL),
                steps: traj.step_count,
                terminated_by: traj.terminated_by,
                csv,
            });
        }
    }
    if let Some(dir) = out_dir {
        emit_svg_lineplot(&series, "INNA on θ1⁴ − 4θ1² + θ2²", "θ1", "θ2", &dir.join("escape_paths.svg"))?;
        write_json(&runs, &dir.join("escape_summary.json"))?;
    }
    Ok(runs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn on_manifold_converges_to_saddle_off_manifold_escapes() {
        let runs = run_escape_figure(None).unwrap();
        assert_eq!(runs.len(), 4);
        for r in &runs {
            let expected = if r.label.ends_with("_on") { Basin::Saddle } else { Basin::PlusSqrt2 };
            assert_eq!(r.basin, expected, "{r:?}");
            assert_eq!(r.terminated_by, Termination::GradTol);
        }
    }
}
