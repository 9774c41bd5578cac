//! CSV and text output of a run.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::environment::Environment;
use crate::geometry::Point3;
use crate::optimizer::{tether_polyline, TrajectoryState};
use crate::scenario::{BatchSummary, MetricsReport, ScenarioError};
use crate::tether::{SampleCount, TetherConfig};

pub const TRAJECTORY_HEADER: &str = "i,t,xg,yg,zg,xa,ya,za,l,dt";

/// One row of the per-robot plot data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlotRow {
    pub t: f64,
    pub p: Point3,
    /// Speed over the segment ending here; zero at the first state.
    pub speed: f64,
    pub clearance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExportedFiles {
    pub trajectory: PathBuf,
    pub tether: PathBuf,
    pub metrics: PathBuf,
    pub plot_ugv: PathBuf,
    pub plot_uav: PathBuf,
}

/// Time, position, speed and obstacle clearance per state, for the UGV when
/// `ugv` is set and the UAV otherwise.
pub fn plot_rows(traj: &[TrajectoryState], env: &Environment, ugv: bool) -> Vec<PlotRow> {
    let pick = |s: &TrajectoryState| if ugv { s.p_g } else { s.p_a };
    let mut t = 0.0;
    traj.iter()
        .enumerate()
        .map(|(i, s)| {
            t += s.dt;
            let p = pick(s);
            let speed = if i == 0 { 0.0 } else { pick(&traj[i - 1]).distance(&p) / s.dt };
            let clearance = if ugv { env.ugv_distance(&p) } else { env.uav_distance(&p) };
            PlotRow { t, p, speed, clearance }
        })
        .collect()
}

fn write(path: PathBuf, text: &str) -> Result<PathBuf, ScenarioError> {
    fs::write(&path, text).map_err(|source| ScenarioError::Io { path: path.clone(), source })?;
    Ok(path)
}

fn trajectory_csv(traj: &[TrajectoryState]) -> String {
    let mut s = format!("{TRAJECTORY_HEADER}\n");
    let mut t = 0.0;
    for (i, st) in traj.iter().enumerate() {
        t += st.dt;
        let (g, a) = (st.p_g, st.p_a);
        let _ = writeln!(s, "{i},{t},{},{},{},{},{},{},{},{}", g.x, g.y, g.z, a.x, a.y, a.z, st.l, st.dt);
    }
    s
}

fn tether_csv(traj: &[TrajectoryState], tether: &TetherConfig) -> String {
    let mut s = String::from("i,j,xt,yt,zt\n");
    for (i, st) in traj.iter().enumerate() {
        for (j, p) in tether_polyline(&st.p_g, &st.p_a, st.l, tether, SampleCount::default()).iter().enumerate() {
            let _ = writeln!(s, "{i},{j},{},{},{}", p.x, p.y, p.z);
        }
    }
    s
}

fn plot_csv(rows: &[PlotRow]) -> String {
    let mut s = String::from("t,x,y,z,speed,clearance\n");
    for r in rows {
        let _ = writeln!(s, "{},{},{},{},{},{}", r.t, r.p.x, r.p.y, r.p.z, r.speed, r.clearance);
    }
    s
}

/// Writes `trajectory.csv`, `tether.csv`, `metrics.txt`, `plot_ugv.csv` and
/// `plot_uav.csv` into `out_dir`, creating it if needed.
///
/// Numbers are written in their shortest exact form: reloading the
/// trajectory gives back the same bits.
pub fn export(
    out_dir: &Path,
    traj: &[TrajectoryState],
    report: &MetricsReport,
    env: &Environment,
    tether: &TetherConfig,
) -> Result<ExportedFiles, ScenarioError> {
    if out_dir.as_os_str().is_empty() {
        return Err(ScenarioError::Invalid("output directory path is empty".into()));
    }
    fs::create_dir_all(out_dir).map_err(|source| ScenarioError::Io { path: out_dir.to_path_buf(), source })?;
    Ok(ExportedFiles {
        trajectory: write(out_dir.join("trajectory.csv"), &trajectory_csv(traj))?,
        tether: write(out_dir.join("tether.csv"), &tether_csv(traj, tether))?,
        metrics: write(out_dir.join("metrics.txt"), &report.to_text())?,
        plot_ugv: write(out_dir.join("plot_ugv.csv"), &plot_csv(&plot_rows(traj, env, true)))?,
        plot_uav: write(out_dir.join("plot_uav.csv"), &plot_csv(&plot_rows(traj, env, false)))?,
    })
}

/// Reads a trajectory written by [`export`]. The `i` and `t` columns are ignored.
pub fn load_trajectory_csv(path: impl AsRef<Path>) -> Result<Vec<TrajectoryState>, ScenarioError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| ScenarioError::Io { path: path.to_path_buf(), source })?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == TRAJECTORY_HEADER => {}
        _ => return Err(ScenarioError::Parse { line: 1, message: format!("expected header `{TRAJECTORY_HEADER}`") }),
    }
    let mut out = Vec::new();
    for (idx, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let v: Vec<f64> = line
            .split(',')
            .map(|f| f.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| ScenarioError::Parse { line: idx + 1, message: e.to_string() })?;
        if v.len() != 10 {
            return Err(ScenarioError::Parse { line: idx + 1, message: format!("expected 10 fields, found {}", v.len()) });
        }
        out.push(TrajectoryState { p_g: Point3::from_slice(&v[2..5]), p_a: Point3::from_slice(&v[5..8]), l: v[8], dt: v[9] });
    }
    Ok(out)
}

/// Writes `summary.txt` with the batch aggregate followed by one line per run.
pub fn write_batch_summary(out_dir: &Path, summary: &BatchSummary, run_lines: &[String]) -> Result<PathBuf, ScenarioError> {
    if out_dir.as_os_str().is_empty() {
        return Err(ScenarioError::Invalid("output directory path is empty".into()));
    }
    fs::create_dir_all(out_dir).map_err(|source| ScenarioError::Io { path: out_dir.to_path_buf(), source })?;
    let mut text = summary.to_text();
    for l in run_lines {
        let _ = writeln!(text, "# {l}");
    }
    write(out_dir.join("summary.txt"), &text)
}
