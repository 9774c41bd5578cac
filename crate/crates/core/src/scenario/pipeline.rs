//! Plan, prepare, optimize and measure, for one seed or a batch of seeds.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};
use std::time::Instant;

use rayon::prelude::*;

use crate::environment::{load_point_cloud, Environment, EnvironmentConfig};
use crate::optimizer::{
    equidistance_targets, optimize, prepare_initial_trajectory, OptimizeReport, OptimizerConfig, PrepareConfig, Thresholds, TrajectoryState,
};
use crate::planner::{plan, JointState, PlannedPath};
use crate::scenario::{compute_metrics, MetricsReport, PipelineConfig, Scenario, ScenarioError, Timings};
use crate::tether::TetherConfig;

/// Environments keyed by cloud file, bounds, UGV start and grid settings.
///
/// Building the distance fields dominates the cost of a short run, so runs
/// that share a scenario share one immutable environment.
#[derive(Default)]
pub struct EnvCache {
    envs: Mutex<HashMap<String, Arc<Environment>>>,
}

impl EnvCache {
    pub fn new() -> Self {
        Self::default()
    }

    fn key(scenario: &Scenario, cfg: &EnvironmentConfig) -> String {
        format!("{}|{:?}|{:?}|{:?}", scenario.cloud_path.display(), scenario.bounds, scenario.start_ugv, cfg)
    }

    /// The cached environment for `scenario`, built on first use.
    pub fn get(&self, scenario: &Scenario, cfg: &EnvironmentConfig) -> Result<Arc<Environment>, ScenarioError> {
        let key = Self::key(scenario, cfg);
        if let Some(env) = self.envs.lock().unwrap_or_else(|e| e.into_inner()).get(&key) {
            return Ok(env.clone());
        }
        // built outside the lock; a racing duplicate build is harmless
        let cloud = load_point_cloud(&scenario.cloud_path)?;
        let env = Arc::new(Environment::build(&cloud, scenario.bounds, scenario.start_ugv, cfg)?);
        let mut map = self.envs.lock().unwrap_or_else(|e| e.into_inner());
        Ok(map.entry(key).or_insert(env).clone())
    }

    /// Registers a prebuilt environment, e.g. one built from an in-memory cloud.
    pub fn insert(&self, scenario: &Scenario, cfg: &EnvironmentConfig, env: Environment) -> Arc<Environment> {
        let env = Arc::new(env);
        self.envs.lock().unwrap_or_else(|e| e.into_inner()).insert(Self::key(scenario, cfg), env.clone());
        env
    }

    pub fn len(&self) -> usize {
        self.envs.lock().unwrap_or_else(|e| e.into_inner()).len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Everything one run produces.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub seed: u64,
    pub path: PlannedPath,
    pub initial: Vec<TrajectoryState>,
    /// The optimized trajectory, or the initial one when the optimizer is skipped.
    pub trajectory: Vec<TrajectoryState>,
    pub thresholds: Thresholds,
    /// Tether settings with the scenario's `l_max`.
    pub tether: TetherConfig,
    pub optimizer: Option<OptimizeReport>,
    pub metrics: MetricsReport,
}

/// Runs the pipeline for one seed.
///
/// An infeasible optimized trajectory is recorded in the metrics, not
/// returned as an error. Planning failures are returned. The timings leave
/// out the environment build.
pub fn run_pipeline(scenario: &Scenario, cache: &EnvCache, cfg: &PipelineConfig, seed: u64) -> Result<RunOutput, ScenarioError> {
    let env = cache.get(scenario, &cfg.environment)?;

    let mut planner = cfg.planner;
    planner.rng_seed = seed;
    planner.tether.l_max = scenario.l_max;
    let tether = planner.tether;

    let clock = Instant::now();
    let path = plan(JointState { p_g: scenario.start_ugv, p_a: scenario.start_uav }, scenario.goal_uav, &env, &planner)?;
    let plan_time = clock.elapsed();

    let clock = Instant::now();
    let prepare = PrepareConfig { tether, ..cfg.prepare };
    let initial = prepare_initial_trajectory(&path.states, &env.edf, &prepare)?;
    let mut thresholds = cfg.thresholds;
    let (eg, ea) = equidistance_targets(&initial);
    if thresholds.rho_eg == 0.0 {
        thresholds.rho_eg = eg;
    }
    if thresholds.rho_ea == 0.0 {
        thresholds.rho_ea = ea;
    }
    let (trajectory, optimizer) = if cfg.skip_optimizer {
        (initial.clone(), None)
    } else {
        let ocfg = OptimizerConfig { tether, ..cfg.optimizer };
        let (t, r) = optimize(&initial, &env, &thresholds, &ocfg)?;
        (t, Some(r))
    };
    let opt_time = clock.elapsed();

    let metrics = compute_metrics(&initial, &trajectory, &env, &thresholds, &tether, Timings::from_durations(plan_time, opt_time));
    Ok(RunOutput { seed, path, initial, trajectory, thresholds, tether, optimizer, metrics })
}

/// Runs `seeds` in parallel over one shared environment. Results come back
/// sorted by seed whatever order the runs finish in.
pub fn run_batch(
    scenario: &Scenario,
    cache: &EnvCache,
    cfg: &PipelineConfig,
    seeds: impl IntoIterator<Item = u64>,
) -> Result<Vec<(u64, Result<RunOutput, ScenarioError>)>, ScenarioError> {
    // build (or fail) once up front rather than in every worker
    cache.get(scenario, &cfg.environment)?;
    let seeds: Vec<u64> = seeds.into_iter().collect();
    let mut out: Vec<_> = seeds.par_iter().map(|&s| (s, run_pipeline(scenario, cache, cfg, s))).collect();
    out.sort_by_key(|(s, _)| *s);
    Ok(out)
}
