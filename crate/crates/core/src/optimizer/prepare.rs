//! Turning a planned path into an initial trajectory.

use crate::environment::DistanceField;
use crate::geometry::Point3;
use crate::optimizer::{OptimizeError, TrajectoryState};
use crate::planner::PathState;
use crate::tether::{check_catenary, TetherConfig};

/// Consecutive waypoints closer than this count as one group.
pub const GROUP_TOLERANCE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrepareConfig {
    /// Nominal UGV speed used to size the initial `dt`.
    pub v_g: f64,
    /// Nominal UAV speed used to size the initial `dt`.
    pub v_a: f64,
    pub dt_min: f64,
    pub tether: TetherConfig,
    /// Clearance required of the recomputed tethers.
    pub tether_clearance: f64,
}

impl Default for PrepareConfig {
    fn default() -> Self {
        Self { v_g: 1.0, v_a: 1.0, dt_min: 0.01, tether: TetherConfig::default(), tether_clearance: 0.1 }
    }
}

/// Spreads runs of near-identical points evenly along the segment to the
/// next distinct point. A trailing run is left as is.
pub fn spread_grouped(points: &[Point3], tol: f64) -> Vec<Point3> {
    let mut out = points.to_vec();
    let mut s = 0;
    while s < points.len() {
        let mut e = s;
        while e + 1 < points.len() && points[e + 1].distance(&points[s]) < tol {
            e += 1;
        }
        if e > s && e + 1 < points.len() {
            let (from, to) = (points[s], points[e + 1]);
            let span = (e + 1 - s) as f64;
            for k in s..=e {
                out[k] = from.lerp(&to, (k - s) as f64 / span);
            }
        }
        s = e + 1;
    }
    out
}

/// Builds the initial trajectory: grouped waypoints of each robot are spread
/// out, tether lengths recomputed, and `dt = max(|dp_g|/v_g, |dp_a|/v_a)`.
///
/// A state whose spread positions lose every clear tether falls back to its
/// original waypoint positions.
pub fn prepare_initial_trajectory<F: DistanceField + ?Sized>(
    path: &[PathState],
    field: &F,
    cfg: &PrepareConfig,
) -> Result<Vec<TrajectoryState>, OptimizeError> {
    if !(cfg.v_g > 0.0 && cfg.v_a > 0.0) {
        return Err(OptimizeError::InvalidInput("nominal speeds must be positive".into()));
    }
    let ugv: Vec<Point3> = path.iter().map(|s| s.p_g).collect();
    let uav: Vec<Point3> = path.iter().map(|s| s.p_a).collect();
    let ugv = spread_grouped(&ugv, GROUP_TOLERANCE);
    let uav = spread_grouped(&uav, GROUP_TOLERANCE);

    let tether_len = |g: &Point3, a: &Point3| {
        let t = &cfg.tether;
        check_catenary(t.attach(g), *a, field, t.l_max, t.delta_l, t.samples, cfg.tether_clearance).ok().flatten()
    };

    let mut out: Vec<TrajectoryState> = Vec::with_capacity(path.len());
    for (i, orig) in path.iter().enumerate() {
        let (p_g, p_a, l) = match tether_len(&ugv[i], &uav[i]) {
            Some(l) => (ugv[i], uav[i], l),
            None => {
                let l = tether_len(&orig.p_g, &orig.p_a).ok_or(OptimizeError::CatenaryLost { index: i })?;
                (orig.p_g, orig.p_a, l)
            }
        };
        let dt = match out.last() {
            None => 0.0,
            Some(prev) => (prev.p_g.distance(&p_g) / cfg.v_g).max(prev.p_a.distance(&p_a) / cfg.v_a).max(cfg.dt_min),
        };
        out.push(TrajectoryState { p_g, p_a, l, dt });
    }
    Ok(out)
}
