//! Per-run statistics of the initial and optimized trajectories.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::environment::Environment;
use crate::geometry::{polyline_length, Point3};
use crate::optimizer::residuals::acceleration;
use crate::optimizer::{check_feasibility, tether_polyline, Thresholds, TrajectoryState, FEASIBILITY_STEP};
use crate::scenario::{parse_key_values, ScenarioError};
use crate::tether::{SampleCount, TetherConfig};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AgentPair<T> {
    pub ugv: T,
    pub uav: T,
}

/// Mean and maximum of a velocity or of an acceleration magnitude.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RateStats {
    pub mean: f64,
    pub max: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ClearanceStats {
    pub mean: f64,
    pub min: f64,
}

/// Wall-clock seconds, rounded to milliseconds.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Timings {
    /// Planning time.
    pub tci: f64,
    /// Preparation plus optimization time.
    pub tco: f64,
}

impl Timings {
    pub fn from_durations(plan: std::time::Duration, optimize: std::time::Duration) -> Self {
        let ms = |d: std::time::Duration| d.as_millis() as f64 / 1000.0;
        Self { tci: ms(plan), tco: ms(optimize) }
    }
}

/// Suffix `i` marks the initial trajectory, `o` the optimized one.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MetricsReport {
    /// Verdict of the post-hoc clearance check on the optimized trajectory.
    pub feasibility: bool,
    pub initial_feasibility: bool,
    pub tci: f64,
    pub tco: f64,
    pub lip: AgentPair<f64>,
    pub lto: AgentPair<f64>,
    pub vti: AgentPair<RateStats>,
    pub vto: AgentPair<RateStats>,
    /// Over the magnitudes `|a|`.
    pub ati: AgentPair<RateStats>,
    pub ato: AgentPair<RateStats>,
    pub doi: AgentPair<ClearanceStats>,
    pub doo: AgentPair<ClearanceStats>,
    /// Tether sample clearances.
    pub dcoi: ClearanceStats,
    pub dcoo: ClearanceStats,
}

/// `|p_i - p_{i-1}| / dt_i` for every state after the first.
pub fn speed_series(traj: &[TrajectoryState], pick: fn(&TrajectoryState) -> Point3) -> Vec<f64> {
    traj.windows(2).map(|w| pick(&w[0]).distance(&pick(&w[1])) / w[1].dt).collect()
}

/// Speed change over the combined duration of the two adjacent segments, per
/// interior state.
pub fn acceleration_series(traj: &[TrajectoryState], pick: fn(&TrajectoryState) -> Point3) -> Vec<f64> {
    let v = speed_series(traj, pick);
    (1..v.len()).map(|k| acceleration(v[k - 1], v[k], traj[k].dt, traj[k + 1].dt)).collect()
}

fn rate(values: impl Iterator<Item = f64>) -> RateStats {
    let (mut sum, mut max, mut n) = (0.0, 0.0f64, 0usize);
    for v in values {
        sum += v;
        max = max.max(v);
        n += 1;
    }
    RateStats { mean: if n > 0 { sum / n as f64 } else { 0.0 }, max }
}

fn clearance(values: impl Iterator<Item = f64>) -> ClearanceStats {
    let (mut sum, mut min, mut n) = (0.0, f64::INFINITY, 0usize);
    for v in values {
        sum += v;
        min = min.min(v);
        n += 1;
    }
    ClearanceStats { mean: if n > 0 { sum / n as f64 } else { f64::INFINITY }, min }
}

fn ugv(s: &TrajectoryState) -> Point3 {
    s.p_g
}

fn uav(s: &TrajectoryState) -> Point3 {
    s.p_a
}

struct Side {
    length: AgentPair<f64>,
    speed: AgentPair<RateStats>,
    accel: AgentPair<RateStats>,
    dist: AgentPair<ClearanceStats>,
    tether: ClearanceStats,
}

fn side(traj: &[TrajectoryState], env: &Environment, tether: &TetherConfig) -> Side {
    let len = |pick: fn(&TrajectoryState) -> Point3| polyline_length(&traj.iter().map(pick).collect::<Vec<_>>());
    let samples = traj.iter().flat_map(|s| tether_polyline(&s.p_g, &s.p_a, s.l, tether, SampleCount::default()));
    Side {
        length: AgentPair { ugv: len(ugv), uav: len(uav) },
        speed: AgentPair { ugv: rate(speed_series(traj, ugv).into_iter()), uav: rate(speed_series(traj, uav).into_iter()) },
        accel: AgentPair {
            ugv: rate(acceleration_series(traj, ugv).into_iter().map(f64::abs)),
            uav: rate(acceleration_series(traj, uav).into_iter().map(f64::abs)),
        },
        dist: AgentPair {
            ugv: clearance(traj.iter().map(|s| env.ugv_distance(&s.p_g))),
            uav: clearance(traj.iter().map(|s| env.uav_distance(&s.p_a))),
        },
        tether: clearance(samples.map(|p| env.uav_distance(&p))),
    }
}

/// Lengths, speeds, accelerations, state clearances and tether clearances of
/// both trajectories, plus the feasibility verdicts.
pub fn compute_metrics(
    initial: &[TrajectoryState],
    optimized: &[TrajectoryState],
    env: &Environment,
    thresholds: &Thresholds,
    tether: &TetherConfig,
    timings: Timings,
) -> MetricsReport {
    let feasible = |t: &[TrajectoryState]| check_feasibility(t, &env.edf, &env.ugv_edf, tether, thresholds, FEASIBILITY_STEP).feasible;
    let (i, o) = (side(initial, env, tether), side(optimized, env, tether));
    MetricsReport {
        feasibility: feasible(optimized),
        initial_feasibility: feasible(initial),
        tci: timings.tci,
        tco: timings.tco,
        lip: i.length,
        lto: o.length,
        vti: i.speed,
        vto: o.speed,
        ati: i.accel,
        ato: o.accel,
        doi: i.dist,
        doo: o.dist,
        dcoi: i.tether,
        dcoo: o.tether,
    }
}

impl MetricsReport {
    /// Every numeric field under its key in the text format.
    fn slots(&mut self) -> Vec<(String, &mut f64)> {
        let mut out = vec![("tci".to_string(), &mut self.tci), ("tco".to_string(), &mut self.tco)];
        for (name, p) in [("lip", &mut self.lip), ("lto", &mut self.lto)] {
            out.push((format!("{name}.ugv"), &mut p.ugv));
            out.push((format!("{name}.uav"), &mut p.uav));
        }
        for (name, p) in [("vti", &mut self.vti), ("vto", &mut self.vto), ("ati", &mut self.ati), ("ato", &mut self.ato)] {
            for (agent, s) in [("ugv", &mut p.ugv), ("uav", &mut p.uav)] {
                out.push((format!("{name}.{agent}.mean"), &mut s.mean));
                out.push((format!("{name}.{agent}.max"), &mut s.max));
            }
        }
        for (name, p) in [("doi", &mut self.doi), ("doo", &mut self.doo)] {
            for (agent, s) in [("ugv", &mut p.ugv), ("uav", &mut p.uav)] {
                out.push((format!("{name}.{agent}.mean"), &mut s.mean));
                out.push((format!("{name}.{agent}.min"), &mut s.min));
            }
        }
        for (name, s) in [("dcoi", &mut self.dcoi), ("dcoo", &mut self.dcoo)] {
            out.push((format!("{name}.mean"), &mut s.mean));
            out.push((format!("{name}.min"), &mut s.min));
        }
        out
    }

    /// `key = value` lines. Floats print in their shortest exact form, so
    /// [`MetricsReport::from_text`] restores every value bit for bit.
    pub fn to_text(&self) -> String {
        let mut s = format!("feasibility = {}\ninitial_feasibility = {}\n", self.feasibility, self.initial_feasibility);
        for (k, v) in self.clone().slots() {
            let _ = writeln!(s, "{k} = {v}");
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self, ScenarioError> {
        let mut map: HashMap<String, (usize, String)> = HashMap::new();
        for (line, k, v) in parse_key_values(text)? {
            map.insert(k, (line, v));
        }
        let boolean = |k: &'static str| -> Result<bool, ScenarioError> {
            let (line, v) = map.get(k).ok_or(ScenarioError::MissingKey(k))?;
            v.parse().map_err(|_| ScenarioError::Parse { line: *line, message: format!("invalid boolean {v:?}") })
        };
        let mut r = MetricsReport {
            feasibility: boolean("feasibility")?,
            initial_feasibility: boolean("initial_feasibility")?,
            ..Default::default()
        };
        for (k, slot) in r.slots() {
            let (line, v) = map.get(&k).ok_or_else(|| ScenarioError::Parse { line: 0, message: format!("missing key `{k}`") })?;
            *slot = v.parse().map_err(|_| ScenarioError::Parse { line: *line, message: format!("invalid number {v:?}") })?;
        }
        Ok(r)
    }
}

/// Aggregate over the runs of one batch.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BatchSummary {
    pub runs: usize,
    /// Runs in which the planner found a path.
    pub planned: usize,
    pub feasible: usize,
    /// `100 * feasible / runs`.
    pub feasibility_pct: f64,
    pub mean_tci: f64,
    pub mean_tco: f64,
    pub mean_vto: AgentPair<f64>,
    pub mean_ato: AgentPair<f64>,
}

impl BatchSummary {
    /// `runs` counts failed runs too; `reports` holds the successful ones.
    pub fn new(runs: usize, reports: &[MetricsReport]) -> Self {
        let k = reports.len().max(1) as f64;
        let mean = |f: fn(&MetricsReport) -> f64| reports.iter().map(f).sum::<f64>() / k;
        let feasible = reports.iter().filter(|r| r.feasibility).count();
        Self {
            runs,
            planned: reports.len(),
            feasible,
            feasibility_pct: if runs > 0 { 100.0 * feasible as f64 / runs as f64 } else { 0.0 },
            mean_tci: mean(|r| r.tci),
            mean_tco: mean(|r| r.tco),
            mean_vto: AgentPair { ugv: mean(|r| r.vto.ugv.mean), uav: mean(|r| r.vto.uav.mean) },
            mean_ato: AgentPair { ugv: mean(|r| r.ato.ugv.mean), uav: mean(|r| r.ato.uav.mean) },
        }
    }

    pub fn to_text(&self) -> String {
        format!(
            "runs = {}\nplanned = {}\nfeasible = {}\nfeasibility_pct = {}\nmean_tci = {}\nmean_tco = {}\n\
             mean_vto.ugv = {}\nmean_vto.uav = {}\nmean_ato.ugv = {}\nmean_ato.uav = {}\n",
            self.runs,
            self.planned,
            self.feasible,
            self.feasibility_pct,
            self.mean_tci,
            self.mean_tco,
            self.mean_vto.ugv,
            self.mean_vto.uav,
            self.mean_ato.ugv,
            self.mean_ato.uav
        )
    }
}
