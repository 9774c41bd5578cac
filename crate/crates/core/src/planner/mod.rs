//! RRT* over the joint UGV+UAV position space.
//!
//! The tether length is not a sampled dimension: every node stores the
//! shortest collision-free catenary length found for its positions. Steering
//! prefers moving the UAV alone, then both robots, then the UGV alone; the
//! cost is a weighted path length that penalizes UGV motion more than UAV
//! motion.

mod config;
mod steer;
mod tree;

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub use config::PlannerConfig;
pub use steer::{sample_state, StateChecker, SteerMode, Steered};
pub use tree::{edge_cost, nearest, nearest_metric, PlannerNode, Tree};

use crate::environment::Environment;
use crate::geometry::{polyline_length, Point3};

/// Joint configuration sampled and steered by the planner.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointState {
    pub p_g: Point3,
    pub p_a: Point3,
}

/// One waypoint of a planned path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathState {
    pub p_g: Point3,
    pub p_a: Point3,
    pub tether_len: f64,
}

impl PathState {
    pub fn joint(&self) -> JointState {
        JointState { p_g: self.p_g, p_a: self.p_a }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlannedPath {
    pub states: Vec<PathState>,
    /// Weighted cost `sum w_g |dp_g| + w_a |dp_a|`.
    pub cost: f64,
    pub ugv_length: f64,
    pub uav_length: f64,
    pub iterations: usize,
    pub tree_size: usize,
    pub wall_time: Duration,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PlanError {
    #[error("start state is infeasible: {0}")]
    InfeasibleStart(String),
    #[error("no path to the goal after {iterations} iterations")]
    NoSolution { iterations: usize },
    #[error("no collision-free UAV sample after {attempts} attempts")]
    SamplingExhausted { attempts: usize },
    #[error("invalid planner configuration: {0}")]
    InvalidConfig(String),
}

/// Weighted length of a path: `sum w_g |dp_g| + w_a |dp_a|`.
pub fn path_cost(states: &[PathState], w_g: f64, w_a: f64) -> f64 {
    states.windows(2).map(|w| w_g * w[0].p_g.distance(&w[1].p_g) + w_a * w[0].p_a.distance(&w[1].p_a)).sum()
}

/// Plans from `start` until the UAV is within `goal_tolerance` of `goal_uav`.
///
/// Runs in batches of `batch_size` iterations and returns the cheapest goal
/// branch at the end of the first batch that has one.
pub fn plan(start: JointState, goal_uav: Point3, env: &Environment, cfg: &PlannerConfig) -> Result<PlannedPath, PlanError> {
    cfg.validate().map_err(PlanError::InvalidConfig)?;
    let clock = Instant::now();
    let checker = StateChecker::new(env, cfg);

    if !checker.uav_free(&start.p_a) {
        return Err(PlanError::InfeasibleStart("UAV start is too close to an obstacle".into()));
    }
    if !checker.ugv_free(&start.p_g) {
        return Err(PlanError::InfeasibleStart("UGV start is blocked or off the traversable set".into()));
    }
    let root_len =
        checker.tether_length(&start).ok_or_else(|| PlanError::InfeasibleStart("no collision-free tether at the start".into()))?;

    let mut tree =
        Tree::new(PlannerNode { p_g: start.p_g, p_a: start.p_a, yaw_g: cfg.root_yaw, tether_len: root_len, cost: 0.0, parent: None });
    let reached = |p: &Point3| p.distance(&goal_uav) <= cfg.goal_tolerance;
    if reached(&start.p_a) {
        return Ok(extract(&tree, 0, cfg, 0, clock.elapsed()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let mut goal_nodes: Vec<usize> = Vec::new();
    let mut iterations = 0;
    while iterations < cfg.max_iters {
        iterations += 1;
        let target = if rng.gen::<f64>() < cfg.goal_bias {
            let p_g = env.traversable.points()[rng.gen_range(0..env.traversable.len())];
            JointState { p_g, p_a: goal_uav }
        } else {
            sample_state(&env.traversable, &env.bounds, &env.edf, cfg.uav_clearance, cfg.sample_budget, &mut rng)?
        };
        let nearest_id = nearest(&tree, &target, cfg);
        let steered = checker.steer(&tree.node(nearest_id).joint(), &target);
        if let Some(steered) = steered {
            let id = tree.insert(nearest_id, steered, &checker);
            if reached(&tree.node(id).p_a) {
                goal_nodes.push(id);
            }
        }
        if iterations % cfg.batch_size == 0 && !goal_nodes.is_empty() {
            break;
        }
    }
    let best = goal_nodes
        .iter()
        .copied()
        .min_by(|&a, &b| tree.node(a).cost.total_cmp(&tree.node(b).cost).then(a.cmp(&b)))
        .ok_or(PlanError::NoSolution { iterations })?;
    Ok(extract(&tree, best, cfg, iterations, clock.elapsed()))
}

fn extract(tree: &Tree, leaf: usize, cfg: &PlannerConfig, iterations: usize, wall_time: Duration) -> PlannedPath {
    let states: Vec<PathState> = tree
        .branch(leaf)
        .into_iter()
        .map(|i| {
            let n = tree.node(i);
            PathState { p_g: n.p_g, p_a: n.p_a, tether_len: n.tether_len }
        })
        .collect();
    let ugv: Vec<Point3> = states.iter().map(|s| s.p_g).collect();
    let uav: Vec<Point3> = states.iter().map(|s| s.p_a).collect();
    PlannedPath {
        cost: path_cost(&states, cfg.w_g, cfg.w_a),
        ugv_length: polyline_length(&ugv),
        uav_length: polyline_length(&uav),
        states,
        iterations,
        tree_size: tree.len(),
        wall_time,
    }
}

/// Re-checks every edge of a path with the planner's edge test.
pub fn validate_path(path: &PlannedPath, env: &Environment, cfg: &PlannerConfig) -> bool {
    let checker = StateChecker::new(env, cfg);
    path.states.first().is_some_and(|s| checker.state_valid(&s.joint()).is_some())
        && path.states.windows(2).all(|w| checker.obstacle_free(&w[0].joint(), &w[1].joint()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(g: f64, a: f64) -> PathState {
        PathState { p_g: Point3::new(g, 0.0, 0.0), p_a: Point3::new(a, 0.0, 2.0), tether_len: 1.0 }
    }

    #[test]
    fn path_cost_definition() {
        assert_eq!(path_cost(&[st(0.0, 0.0)], 1.5, 1.0), 0.0);
        assert!((path_cost(&[st(0.0, 0.0), st(1.0, 2.0)], 1.5, 1.0) - 3.5).abs() < 1e-12);
    }

    #[test]
    fn config_rejects_inverted_weights() {
        let cfg = PlannerConfig { w_g: 1.0, w_a: 1.5, ..Default::default() };
        assert!(cfg.validate().is_err());
        assert!(PlannerConfig::default().validate().is_ok());
    }
}
