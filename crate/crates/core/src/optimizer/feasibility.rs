//! Post-hoc clearance check of a trajectory.

use std::fmt;

use crate::environment::DistanceField;
use crate::optimizer::{tether_polyline, Thresholds, TrajectoryState};
use crate::tether::{SampleCount, TetherConfig};

/// Spacing of the interpolated states checked between trajectory states.
pub const FEASIBILITY_STEP: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Agent {
    Ugv,
    Uav,
    Tether,
}

impl fmt::Display for Agent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Agent::Ugv => "UGV",
            Agent::Uav => "UAV",
            Agent::Tether => "tether",
        })
    }
}

/// The worst clearance violation found.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub agent: Agent,
    /// Trajectory state nearest to the violating sample.
    pub index: usize,
    /// Clearance minus threshold; negative or zero.
    pub margin: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeasibilityReport {
    pub feasible: bool,
    pub min_ugv_clearance: f64,
    pub min_uav_clearance: f64,
    pub min_tether_clearance: f64,
    pub violation: Option<Violation>,
}

/// Checks `d_og > rho_og`, `d_oa > rho_oa` and every tether sample
/// `> rho_ot` on the states and on interpolated states every `step` meters.
pub fn check_feasibility<U: DistanceField + ?Sized, G: DistanceField + ?Sized>(
    traj: &[TrajectoryState],
    uav_field: &U,
    ugv_field: &G,
    tether: &TetherConfig,
    thr: &Thresholds,
    step: f64,
) -> FeasibilityReport {
    let mut report = FeasibilityReport {
        feasible: true,
        min_ugv_clearance: f64::INFINITY,
        min_uav_clearance: f64::INFINITY,
        min_tether_clearance: f64::INFINITY,
        violation: None,
    };
    let note = |agent: Agent, index: usize, margin: f64, report: &mut FeasibilityReport| {
        if margin <= 0.0 {
            report.feasible = false;
            if report.violation.is_none_or(|v| margin < v.margin) {
                report.violation = Some(Violation { agent, index, margin });
            }
        }
    };
    let visit = |s: &TrajectoryState, index: usize, report: &mut FeasibilityReport| {
        let dg = ugv_field.distance(&s.p_g);
        let da = uav_field.distance(&s.p_a);
        report.min_ugv_clearance = report.min_ugv_clearance.min(dg);
        report.min_uav_clearance = report.min_uav_clearance.min(da);
        note(Agent::Ugv, index, dg - thr.rho_og, report);
        note(Agent::Uav, index, da - thr.rho_oa, report);
        for p in tether_polyline(&s.p_g, &s.p_a, s.l, tether, SampleCount::default()) {
            let dt = uav_field.distance(&p);
            report.min_tether_clearance = report.min_tether_clearance.min(dt);
            note(Agent::Tether, index, dt - thr.rho_ot, report);
        }
    };

    for (i, s) in traj.iter().enumerate() {
        if i > 0 {
            let prev = &traj[i - 1];
            let span = prev.p_g.distance(&s.p_g).max(prev.p_a.distance(&s.p_a));
            let k = (span / step).ceil() as usize;
            for j in 1..k {
                let t = j as f64 / k as f64;
                let mid = TrajectoryState {
                    p_g: prev.p_g.lerp(&s.p_g, t),
                    p_a: prev.p_a.lerp(&s.p_a, t),
                    l: prev.l + (s.l - prev.l) * t,
                    dt: 0.0,
                };
                visit(&mid, if t < 0.5 { i - 1 } else { i }, &mut report);
            }
        }
        visit(s, i, &mut report);
    }
    report
}
