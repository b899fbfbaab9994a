//! Experiment drivers: the spiral study on a quadratic, saddle-escape
//! trajectories and Monte Carlo basin statistics on the double well, plus
//! the CSV/SVG/JSON writers they share.

mod figure;
mod io;
mod montecarlo;
mod regime;
mod spiral;

pub use figure::{run_escape_figure, EscapeRun, OFF_MANIFOLD_START, ON_MANIFOLD_START};
pub use io::{emit_csv, emit_csv_with, emit_svg_lineplot, render_svg_lineplot, trajectory_header, Series};
pub use montecarlo::{
    classify_basin, escape_iteration, run_escape_montecarlo, run_escape_montecarlo_from, thread_cap, Algorithm, Basin, BasinCounts,
    InitMode, MonteCarloConfig, MonteCarloReport, RunOutcome, DEFAULT_STEP_FRACTION, THREADS_ENV,
};
pub use regime::{run_regime_report, EigenRegime, RegimeReport};
pub use spiral::{default_spiral_configs, run_spiral_experiment, SpiralConfig, SpiralSummary, SPIRAL_COUNT_RADIUS, SPIRAL_MAX_ITER};

pub(crate) use io::write_json;
