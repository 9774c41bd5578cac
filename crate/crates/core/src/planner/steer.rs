//! Sampling, state validity, edge checking and the three-mode steering step.

use rand::Rng;

use crate::environment::{DistanceField, Environment, TraversableSet};
use crate::geometry::{Aabb, Point3};
use crate::planner::{JointState, PlanError, PlannerConfig};
use crate::tether::check_catenary;

/// Which steering mode produced a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SteerMode {
    /// UAV moves, UGV fixed.
    UavOnly,
    /// Both robots move.
    Joint,
    /// UGV moves, UAV fixed.
    UgvOnly,
}

/// A steering result: the new joint state and its shortest clear tether length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Steered {
    pub state: JointState,
    pub tether_len: f64,
    pub mode: SteerMode,
}

/// Draws a joint sample: UGV uniformly over the traversable points, UAV
/// uniformly in `bounds` with rejection until it clears `uav_clearance`.
pub fn sample_state<F: DistanceField + ?Sized, R: Rng + ?Sized>(
    tset: &TraversableSet,
    bounds: &Aabb,
    uav_field: &F,
    uav_clearance: f64,
    budget: usize,
    rng: &mut R,
) -> Result<JointState, PlanError> {
    assert!(!tset.is_empty(), "sampling needs a non-empty traversable set");
    let p_g = tset.points()[rng.gen_range(0..tset.len())];
    for _ in 0..budget {
        let p_a = Point3::new(
            sample_axis(rng, bounds.min.x, bounds.max.x),
            sample_axis(rng, bounds.min.y, bounds.max.y),
            sample_axis(rng, bounds.min.z, bounds.max.z),
        );
        if uav_field.distance(&p_a) > uav_clearance {
            return Ok(JointState { p_g, p_a });
        }
    }
    Err(PlanError::SamplingExhausted { attempts: budget })
}

fn sample_axis<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    if hi > lo {
        rng.gen_range(lo..=hi)
    } else {
        lo
    }
}

/// Validity checks shared by steering and edge tests.
#[derive(Clone, Copy)]
pub struct StateChecker<'a> {
    pub env: &'a Environment,
    pub cfg: &'a PlannerConfig,
}

impl<'a> StateChecker<'a> {
    pub fn new(env: &'a Environment, cfg: &'a PlannerConfig) -> Self {
        Self { env, cfg }
    }

    pub fn uav_free(&self, p_a: &Point3) -> bool {
        self.env.uav_distance(p_a) > self.cfg.uav_clearance
    }

    pub fn ugv_free(&self, p_g: &Point3) -> bool {
        self.env.ugv_distance(p_g) > self.cfg.ugv_clearance
            && self.env.traversable.distance_to_traversable(p_g).0 <= self.cfg.max_traversable_gap
    }

    /// Shortest collision-free tether length, if any.
    pub fn tether_length(&self, state: &JointState) -> Option<f64> {
        let t = &self.cfg.tether;
        check_catenary(t.attach(&state.p_g), state.p_a, &self.env.edf, t.l_max, t.delta_l, t.samples, self.cfg.tether_clearance)
            .ok()
            .flatten()
    }

    /// Robots clear and a clear tether exists; returns that tether length.
    pub fn state_valid(&self, state: &JointState) -> Option<f64> {
        if self.uav_free(&state.p_a) && self.ugv_free(&state.p_g) {
            self.tether_length(state)
        } else {
            None
        }
    }

    /// Interpolates both robots from `from` to `to` every `interp_step` and
    /// checks every interpolated state, including `to` itself.
    pub fn obstacle_free(&self, from: &JointState, to: &JointState) -> bool {
        let span = from.p_g.distance(&to.p_g).max(from.p_a.distance(&to.p_a));
        if span == 0.0 {
            return true;
        }
        let steps = (span / self.cfg.interp_step).ceil().max(1.0) as usize;
        (1..=steps).all(|s| {
            let t = s as f64 / steps as f64;
            let state = JointState { p_g: from.p_g.lerp(&to.p_g, t), p_a: from.p_a.lerp(&to.p_a, t) };
            self.state_valid(&state).is_some()
        })
    }

    fn project_ugv(&self, p: &Point3) -> Point3 {
        self.env.traversable.distance_to_traversable(p).1
    }

    /// Extends from `nearest` toward `target`, trying UAV-only, joint and
    /// UGV-only motion in that order. `None` when no mode yields a valid edge.
    pub fn steer(&self, nearest: &JointState, target: &JointState) -> Option<Steered> {
        let p_a_step = nearest.p_a.step_toward(&target.p_a, self.cfg.epsilon_a);
        let p_g_step = self.project_ugv(&nearest.p_g.step_toward(&target.p_g, self.cfg.epsilon_g));

        let candidates = [
            (SteerMode::UavOnly, JointState { p_g: nearest.p_g, p_a: p_a_step }),
            (SteerMode::Joint, JointState { p_g: p_g_step, p_a: p_a_step }),
            (SteerMode::UgvOnly, JointState { p_g: p_g_step, p_a: nearest.p_a }),
        ];
        for (mode, state) in candidates {
            if state == *nearest {
                continue;
            }
            if let Some(tether_len) = self.state_valid(&state) {
                if self.obstacle_free(nearest, &state) {
                    return Some(Steered { state, tether_len, mode });
                }
            }
        }
        None
    }
}
