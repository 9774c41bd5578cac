//! Scenario files, the plan-then-optimize pipeline, metrics and export.
//!
//! Scenario and parameter files share one flat text format: a `key = value`
//! pair per line, `#` comments, points written as `x, y, z`.

mod export;
mod metrics;
mod pipeline;

use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::environment::{EnvError, EnvironmentConfig};
use crate::geometry::{Aabb, Point3};
use crate::optimizer::{OptimizeError, OptimizerConfig, PrepareConfig, Thresholds};
use crate::planner::{PlanError, PlannerConfig};

pub use export::{export, load_trajectory_csv, plot_rows, write_batch_summary, ExportedFiles, PlotRow};
pub use metrics::{
    acceleration_series, compute_metrics, speed_series, AgentPair, BatchSummary, ClearanceStats, MetricsReport, RateStats, Timings,
};
pub use pipeline::{run_batch, run_pipeline, EnvCache, RunOutput};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("missing key `{0}`")]
    MissingKey(&'static str),
    #[error("invalid scenario: {0}")]
    Invalid(String),
    #[error(transparent)]
    Environment(#[from] EnvError),
    #[error(transparent)]
    Plan(#[from] PlanError),
    #[error(transparent)]
    Optimize(#[from] OptimizeError),
}

/// Splits `key = value` text into `(line number, key, value)` triples.
pub fn parse_key_values(text: &str) -> Result<Vec<(usize, String, String)>, ScenarioError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| ScenarioError::Parse { line: idx + 1, message: format!("expected `key = value`, found {line:?}") })?;
        let key = k.trim();
        if key.is_empty() {
            return Err(ScenarioError::Parse { line: idx + 1, message: "empty key".into() });
        }
        out.push((idx + 1, key.to_string(), v.trim().to_string()));
    }
    Ok(out)
}

pub fn parse_f64(line: usize, v: &str) -> Result<f64, ScenarioError> {
    v.parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(|| ScenarioError::Parse { line, message: format!("invalid number {v:?}") })
}

pub fn parse_point(line: usize, v: &str) -> Result<Point3, ScenarioError> {
    let parts: Vec<&str> = v.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(ScenarioError::Parse { line, message: format!("expected `x, y, z`, found {v:?}") });
    }
    let mut xyz = [0.0; 3];
    for (slot, p) in xyz.iter_mut().zip(parts) {
        *slot = parse_f64(line, p)?;
    }
    Ok(Point3::from(xyz))
}

fn parse_parsed<T: std::str::FromStr>(line: usize, v: &str) -> Result<T, ScenarioError> {
    v.parse::<T>().map_err(|_| ScenarioError::Parse { line, message: format!("invalid value {v:?}") })
}

fn read(path: &Path) -> Result<String, ScenarioError> {
    fs::read_to_string(path).map_err(|source| ScenarioError::Io { path: path.to_path_buf(), source })
}

/// A benchmark setup: a point cloud, the working volume and the mission.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    /// Resolved against the scenario file's directory when loaded.
    pub cloud_path: PathBuf,
    pub bounds: Aabb,
    pub start_ugv: Point3,
    pub start_uav: Point3,
    pub goal_uav: Point3,
    pub l_max: f64,
}

impl Scenario {
    /// Parses scenario text. A relative `cloud` path is joined onto `base_dir`.
    pub fn parse(text: &str, base_dir: &Path) -> Result<Self, ScenarioError> {
        let mut name = None;
        let mut cloud = None;
        let (mut lo, mut hi, mut sg, mut sa, mut goal, mut l_max) = (None, None, None, None, None, None);
        for (line, key, value) in parse_key_values(text)? {
            match key.as_str() {
                "name" => name = Some(value),
                "cloud" => cloud = Some(base_dir.join(&value)),
                "bounds_min" => lo = Some(parse_point(line, &value)?),
                "bounds_max" => hi = Some(parse_point(line, &value)?),
                "start_ugv" => sg = Some(parse_point(line, &value)?),
                "start_uav" => sa = Some(parse_point(line, &value)?),
                "goal_uav" => goal = Some(parse_point(line, &value)?),
                "l_max" => l_max = Some(parse_f64(line, &value)?),
                _ => return Err(ScenarioError::Parse { line, message: format!("unknown key `{key}`") }),
            }
        }
        let s = Scenario {
            name: name.ok_or(ScenarioError::MissingKey("name"))?,
            cloud_path: cloud.ok_or(ScenarioError::MissingKey("cloud"))?,
            bounds: Aabb::new(lo.ok_or(ScenarioError::MissingKey("bounds_min"))?, hi.ok_or(ScenarioError::MissingKey("bounds_max"))?),
            start_ugv: sg.ok_or(ScenarioError::MissingKey("start_ugv"))?,
            start_uav: sa.ok_or(ScenarioError::MissingKey("start_uav"))?,
            goal_uav: goal.ok_or(ScenarioError::MissingKey("goal_uav"))?,
            l_max: l_max.ok_or(ScenarioError::MissingKey("l_max"))?,
        };
        s.validate()?;
        Ok(s)
    }

    /// Loads and validates a scenario file, including the cloud's existence.
    pub fn load(path: impl AsRef<Path>) -> Result<Self, ScenarioError> {
        let path = path.as_ref();
        let base = path.parent().unwrap_or(Path::new("."));
        let s = Self::parse(&read(path)?, base)?;
        if !s.cloud_path.is_file() {
            return Err(ScenarioError::Invalid(format!("cloud file {} does not exist", s.cloud_path.display())));
        }
        Ok(s)
    }

    /// Scenario text with `cloud` written as given.
    pub fn to_text(&self, cloud: &str) -> String {
        let p = |p: &Point3| format!("{}, {}, {}", p.x, p.y, p.z);
        format!(
            "name = {}\ncloud = {}\nbounds_min = {}\nbounds_max = {}\nstart_ugv = {}\nstart_uav = {}\ngoal_uav = {}\nl_max = {}\n",
            self.name,
            cloud,
            p(&self.bounds.min),
            p(&self.bounds.max),
            p(&self.start_ugv),
            p(&self.start_uav),
            p(&self.goal_uav),
            self.l_max
        )
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        let b = &self.bounds;
        if !(b.min.x < b.max.x && b.min.y < b.max.y && b.min.z < b.max.z) {
            return Err(ScenarioError::Invalid("bounds_min must lie below bounds_max on every axis".into()));
        }
        for (label, p) in [("start_ugv", &self.start_ugv), ("start_uav", &self.start_uav), ("goal_uav", &self.goal_uav)] {
            if !b.contains(p) {
                return Err(ScenarioError::Invalid(format!("{label} {p} lies outside the bounds")));
            }
        }
        if !(self.l_max > 0.0) {
            return Err(ScenarioError::Invalid(format!("l_max must be positive (got {})", self.l_max)));
        }
        if self.name.is_empty() || self.name.contains(char::is_whitespace) {
            return Err(ScenarioError::Invalid(format!("name must be a single word (got {:?})", self.name)));
        }
        Ok(())
    }
}

/// Every tunable of the pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PipelineConfig {
    pub environment: EnvironmentConfig,
    /// `tether.l_max` is replaced by the scenario's value.
    pub planner: PlannerConfig,
    pub prepare: PrepareConfig,
    pub optimizer: OptimizerConfig,
    /// Zero spacing targets are filled in from the initial trajectory.
    pub thresholds: Thresholds,
    /// Report the initial trajectory as the final one.
    pub skip_optimizer: bool,
}

impl PipelineConfig {
    /// Applies `key = value` overrides. Unknown keys are an error.
    pub fn apply_params(&mut self, text: &str) -> Result<(), ScenarioError> {
        for (line, key, value) in parse_key_values(text)? {
            self.set(line, &key, &value)?;
        }
        Ok(())
    }

    pub fn load_params(&mut self, path: impl AsRef<Path>) -> Result<(), ScenarioError> {
        self.apply_params(&read(path.as_ref())?)
    }

    fn set(&mut self, line: usize, key: &str, value: &str) -> Result<(), ScenarioError> {
        let f = || parse_f64(line, value);
        let (pl, th, w) = (&mut self.planner, &mut self.thresholds, &mut self.optimizer.weights);
        match key {
            "resolution" => self.environment.resolution = f()?,
            "step_max" => self.environment.traversability.step_max = f()?,
            "epsilon_g" => pl.epsilon_g = f()?,
            "epsilon_a" => pl.epsilon_a = f()?,
            "w_g" => pl.w_g = f()?,
            "w_a" => pl.w_a = f()?,
            "w_yaw" => pl.w_yaw = f()?,
            "neighbor_radius" => pl.neighbor_radius = f()?,
            "goal_tolerance" => pl.goal_tolerance = f()?,
            "goal_bias" => pl.goal_bias = f()?,
            "batch_size" => pl.batch_size = parse_parsed(line, value)?,
            "interp_step" => pl.interp_step = f()?,
            "uav_clearance" => pl.uav_clearance = f()?,
            "ugv_clearance" => pl.ugv_clearance = f()?,
            "tether_clearance" => pl.tether_clearance = f()?,
            "attach_z" => pl.tether.attach_z = f()?,
            "delta_l" => pl.tether.delta_l = f()?,
            "v_g" => self.prepare.v_g = f()?,
            "v_a" => self.prepare.v_a = f()?,
            "gamma_eg" => w.eg = f()?,
            "gamma_og" => w.og = f()?,
            "gamma_trav" => w.trav = f()?,
            "gamma_sg" => w.sg = f()?,
            "gamma_vg" => w.vg = f()?,
            "gamma_ag" => w.ag = f()?,
            "gamma_ea" => w.ea = f()?,
            "gamma_oa" => w.oa = f()?,
            "gamma_sa" => w.sa = f()?,
            "gamma_va" => w.va = f()?,
            "gamma_aa" => w.aa = f()?,
            "gamma_ot" => w.ot = f()?,
            "gamma_u" => w.u = f()?,
            "rho_og" => th.rho_og = f()?,
            "rho_oa" => th.rho_oa = f()?,
            "rho_ot" => th.rho_ot = f()?,
            "rho_trav" => th.rho_trav = f()?,
            "rho_sg" => th.rho_sg = f()?,
            "rho_sa" => th.rho_sa = f()?,
            "rho_vg" => th.rho_vg = f()?,
            "rho_va" => th.rho_va = f()?,
            "beta" => th.beta = f()?,
            "g_tol" => self.optimizer.g_tol = f()?,
            "f_tol" => self.optimizer.f_tol = f()?,
            "dt_min" => self.optimizer.dt_min = f()?,
            "cauchy_scale" => self.optimizer.cauchy_scale = f()?,
            "tether_samples" => self.optimizer.tether_samples = parse_parsed(line, value)?,
            "fix_ugv_height" => self.optimizer.fix_ugv_height = parse_parsed(line, value)?,
            _ => return Err(ScenarioError::Parse { line, message: format!("unknown parameter `{key}`") }),
        }
        Ok(())
    }
}
