//! CSV and SVG writers.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::dynamics::Trajectory;
use crate::{Error, Result};

/// Header of the trajectory CSV for a `p`-dimensional run.
pub fn trajectory_header(p: usize) -> Vec<String> {
    let mut h = vec!["iter".to_string()];
    h.extend((0..p).map(|i| format!("theta_{i}")));
    h.extend((0..p).map(|i| format!("psi_{i}")));
    h.extend(["loss", "grad_norm", "lyapunov", "coupling_residual"].map(String::from));
    h
}

/// Writes one row per recorded state. Floats use the shortest
/// representation that parses back to the same value.
pub fn emit_csv(traj: &Trajectory, path: &Path) -> Result<()> {
    emit_csv_with(traj, &[], path)
}

/// As [`emit_csv`], with extra per-iteration columns appended after the
/// standard ones.
pub fn emit_csv_with(traj: &Trajectory, extra: &[(&str, &[f64])], path: &Path) -> Result<()> {
    let csv_err = |source| Error::Csv { path: path.to_path_buf(), source };
    let n = traj.states.len();
    if let Some((name, col)) = extra.iter().find(|(_, c)| c.len() != n) {
        return Err(Error::invalid(format!("extra column `{name}` has {} rows, trajectory has {n}", col.len())));
    }
    let p = traj.states.first().map_or(0, |s| s.dim());
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    let mut header = trajectory_header(p);
    header.extend(extra.iter().map(|(name, _)| name.to_string()));
    w.write_record(&header).map_err(csv_err)?;
    for (k, s) in traj.states.iter().enumerate() {
        let mut row = vec![k.to_string()];
        row.extend(s.theta.iter().chain(s.psi.iter()).map(f64::to_string));
        for x in [traj.losses[k], traj.grad_norms[k], traj.lyapunov[k], traj.coupling_residuals[k]] {
            row.push(x.to_string());
        }
        row.extend(extra.iter().map(|(_, col)| col[k].to_string()));
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// A named polyline.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

impl Series {
    pub fn new(name: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Self { name: name.into(), points }
    }

    /// `(k, ys[k])` for every finite entry.
    pub fn indexed(name: impl Into<String>, ys: impl IntoIterator<Item = f64>) -> Self {
        Self::new(name, ys.into_iter().enumerate().map(|(k, y)| (k as f64, y)).collect())
    }
}

const PALETTE: [&str; 6] = ["#d62728", "#ff7f0e", "#1f77b4", "#2ca02c", "#9467bd", "#8c564b"];

fn escape_xml(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Self-contained SVG line plot with linear axes, axis labels and a
/// legend. Non-finite points are skipped; with no data the axes span
/// `[0, 1]`.
pub fn render_svg_lineplot(series: &[Series], title: &str, x_label: &str, y_label: &str) -> String {
    const W: f64 = 640.0;
    const H: f64 = 480.0;
    const M: f64 = 60.0;
    let finite = || series.iter().flat_map(|s| s.points.iter()).filter(|(x, y)| x.is_finite() && y.is_finite());
    let range = |get: fn(&(f64, f64)) -> f64| {
        let (lo, hi) = finite().map(get).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
        match (lo.is_finite(), hi > lo) {
            (false, _) => (0.0, 1.0),
            (true, false) => (lo - 0.5, lo + 0.5),
            (true, true) => (lo, hi),
        }
    };
    let (x0, x1) = range(|p| p.0);
    let (y0, y1) = range(|p| p.1);
    let sx = |x: f64| M + (x - x0) / (x1 - x0) * (W - 2.0 * M);
    let sy = |y: f64| H - M - (y - y0) / (y1 - y0) * (H - 2.0 * M);

    let mut out = String::new();
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#);
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(out, r#"<text x="{}" y="24" text-anchor="middle" font-family="sans-serif" font-size="16">{}</text>"#, W / 2.0, escape_xml(title));
    let _ = writeln!(out, r#"<line x1="{M}" y1="{}" x2="{}" y2="{}" stroke="black"/>"#, H - M, W - M, H - M);
    let _ = writeln!(out, r#"<line x1="{M}" y1="{M}" x2="{M}" y2="{}" stroke="black"/>"#, H - M);
    for (v, x, y, anchor) in [(x0, M, H - M + 16.0, "start"), (x1, W - M, H - M + 16.0, "end")] {
        let _ = writeln!(out, r#"<text x="{x}" y="{y}" text-anchor="{anchor}" font-family="sans-serif" font-size="11">{v:.4}</text>"#);
    }
    for (v, y) in [(y0, H - M), (y1, M + 4.0)] {
        let _ = writeln!(out, r#"<text x="{}" y="{y}" text-anchor="end" font-family="sans-serif" font-size="11">{v:.4}</text>"#, M - 4.0);
    }
    let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="13">{}</text>"#, W / 2.0, H - 16.0, escape_xml(x_label));
    let _ = writeln!(
        out,
        r#"<text x="16" y="{}" text-anchor="middle" font-family="sans-serif" font-size="13" transform="rotate(-90 16 {})">{}</text>"#,
        H / 2.0,
        H / 2.0,
        escape_xml(y_label)
    );
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let pts: Vec<String> = s
            .points
            .iter()
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        if !pts.is_empty() {
            let _ = writeln!(out, r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#, pts.join(" "));
        }
        let ly = M + 16.0 * i as f64;
        let _ = writeln!(out, r#"<line x1="{}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#, W - M - 150.0, W - M - 130.0);
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12">{}</text>"#,
            W - M - 125.0,
            ly + 4.0,
            escape_xml(&s.name)
        );
    }
    out.push_str("</svg>\n");
    out
}

pub fn emit_svg_lineplot(series: &[Series], title: &str, x_label: &str, y_label: &str, path: &Path) -> Result<()> {
    fs::write(path, render_svg_lineplot(series, title, x_label, y_label)).map_err(|e| Error::io(path, e))
}

pub(crate) fn write_json<T: serde::Serialize>(value: &T, path: &Path) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|source| Error::Json {
        context: path.display().to_string(),
        source,
    })?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(path, e))
}
