//! Trajectory optimization of a planned path.
//!
//! The planned path becomes a time-parameterized trajectory with one
//! `(p_g, p_a, l, dt)` block per state. A damped least-squares solver then
//! minimizes the Cauchy-robustified sum of thirteen weighted residual
//! families: spacing, clearance, traversability, smoothness, speed and
//! acceleration for each robot, plus two tether terms. All constraints are
//! soft; feasibility is checked afterwards.

mod band;
mod feasibility;
mod prepare;
mod problem;
pub mod residuals;

use std::f64::consts::PI;
use std::fmt;

use thiserror::Error;

pub use band::{BandCholesky, BandMatrix, NotPositiveDefinite};
pub use feasibility::{check_feasibility, Agent, FeasibilityReport, Violation, FEASIBILITY_STEP};
pub use prepare::{prepare_initial_trajectory, spread_grouped, PrepareConfig};
pub use problem::CostModel;

use crate::environment::Environment;
use crate::geometry::{polyline_length, Point3};
use crate::tether::{tether_shape, SampleCount, TetherConfig, TAUT_EPSILON};

/// Variables per trajectory state: `p_g`, `p_a`, `l`, `dt`.
pub const STATE_DIM: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryState {
    pub p_g: Point3,
    pub p_a: Point3,
    /// Tether length.
    pub l: f64,
    /// Time since the previous state; zero for the first state.
    pub dt: f64,
}

/// The residual families of the cost.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    EquidistanceUgv,
    EquidistanceUav,
    ObstacleUgv,
    ObstacleUav,
    Traversability,
    SmoothnessUgv,
    SmoothnessUav,
    VelocityUgv,
    VelocityUav,
    AccelerationUgv,
    AccelerationUav,
    TetherObstacle,
    TetherLength,
}

impl Family {
    pub const ALL: [Family; 13] = [
        Family::EquidistanceUgv,
        Family::EquidistanceUav,
        Family::ObstacleUgv,
        Family::ObstacleUav,
        Family::Traversability,
        Family::SmoothnessUgv,
        Family::SmoothnessUav,
        Family::VelocityUgv,
        Family::VelocityUav,
        Family::AccelerationUgv,
        Family::AccelerationUav,
        Family::TetherObstacle,
        Family::TetherLength,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::EquidistanceUgv => "equidistance_ugv",
            Family::EquidistanceUav => "equidistance_uav",
            Family::ObstacleUgv => "obstacle_ugv",
            Family::ObstacleUav => "obstacle_uav",
            Family::Traversability => "traversability",
            Family::SmoothnessUgv => "smoothness_ugv",
            Family::SmoothnessUav => "smoothness_uav",
            Family::VelocityUgv => "velocity_ugv",
            Family::VelocityUav => "velocity_uav",
            Family::AccelerationUgv => "acceleration_ugv",
            Family::AccelerationUav => "acceleration_uav",
            Family::TetherObstacle => "tether_obstacle",
            Family::TetherLength => "tether_length",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Residual weights. All lie in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Weights {
    pub eg: f64,
    pub og: f64,
    pub trav: f64,
    pub sg: f64,
    pub vg: f64,
    pub ag: f64,
    pub ea: f64,
    pub oa: f64,
    pub sa: f64,
    pub va: f64,
    pub aa: f64,
    pub ot: f64,
    pub u: f64,
}

impl Default for Weights {
    fn default() -> Self {
        Self {
            eg: 0.2,
            og: 0.08,
            trav: 0.5,
            sg: 0.12,
            vg: 0.05,
            ag: 0.005,
            ea: 0.25,
            oa: 0.08,
            sa: 0.14,
            va: 0.05,
            aa: 0.005,
            ot: 0.25,
            u: 0.1,
        }
    }
}

impl Weights {
    pub fn gamma(&self, family: Family) -> f64 {
        match family {
            Family::EquidistanceUgv => self.eg,
            Family::EquidistanceUav => self.ea,
            Family::ObstacleUgv => self.og,
            Family::ObstacleUav => self.oa,
            Family::Traversability => self.trav,
            Family::SmoothnessUgv => self.sg,
            Family::SmoothnessUav => self.sa,
            Family::VelocityUgv => self.vg,
            Family::VelocityUav => self.va,
            Family::AccelerationUgv => self.ag,
            Family::AccelerationUav => self.aa,
            Family::TetherObstacle => self.ot,
            Family::TetherLength => self.u,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        for f in Family::ALL {
            let g = self.gamma(f);
            if !(0.0..=1.0).contains(&g) {
                return Err(format!("weight for {f} must lie in [0, 1] (got {g})"));
            }
        }
        Ok(())
    }
}

/// Residual thresholds and targets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    /// Target UGV spacing between states.
    pub rho_eg: f64,
    /// Target UAV spacing between states.
    pub rho_ea: f64,
    pub rho_og: f64,
    pub rho_oa: f64,
    pub rho_ot: f64,
    pub rho_trav: f64,
    pub rho_sg: f64,
    pub rho_sa: f64,
    pub rho_vg: f64,
    pub rho_va: f64,
    /// Multiplier for tether samples inside `rho_ot`.
    pub beta: f64,
}

impl Default for Thresholds {
    /// Spacing targets default to zero; use [`Thresholds::for_trajectory`].
    fn default() -> Self {
        Self {
            rho_eg: 0.0,
            rho_ea: 0.0,
            rho_og: 1.2,
            rho_oa: 1.2,
            rho_ot: 0.1,
            rho_trav: 0.001,
            rho_sg: PI / 9.0,
            rho_sa: PI / 9.0,
            rho_vg: 1.0,
            rho_va: 1.0,
            beta: 10.0,
        }
    }
}

impl Thresholds {
    /// Defaults with the spacing targets set to each robot's path length
    /// divided by the number of steps.
    pub fn for_trajectory(traj: &[TrajectoryState]) -> Self {
        let mut t = Self::default();
        (t.rho_eg, t.rho_ea) = equidistance_targets(traj);
        t
    }

    pub fn validate(&self) -> Result<(), String> {
        let positive = [
            ("rho_og", self.rho_og),
            ("rho_oa", self.rho_oa),
            ("rho_ot", self.rho_ot),
            ("rho_trav", self.rho_trav),
            ("rho_sg", self.rho_sg),
            ("rho_sa", self.rho_sa),
            ("rho_vg", self.rho_vg),
            ("rho_va", self.rho_va),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(format!("{name} must be positive (got {v})"));
            }
        }
        if !(self.rho_eg >= 0.0 && self.rho_ea >= 0.0) {
            return Err("spacing targets must be non-negative".into());
        }
        if !(self.beta > 1.0) {
            return Err(format!("beta must exceed 1 (got {})", self.beta));
        }
        Ok(())
    }
}

/// Path length over step count for the UGV and the UAV.
pub fn equidistance_targets(traj: &[TrajectoryState]) -> (f64, f64) {
    if traj.len() < 2 {
        return (0.0, 0.0);
    }
    let steps = (traj.len() - 1) as f64;
    let g: Vec<Point3> = traj.iter().map(|s| s.p_g).collect();
    let a: Vec<Point3> = traj.iter().map(|s| s.p_a).collect();
    (polyline_length(&g) / steps, polyline_length(&a) / steps)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig {
    pub weights: Weights,
    pub max_iters: usize,
    /// Stop when the max-norm of the cost gradient drops below this.
    pub g_tol: f64,
    /// Stop when an accepted step lowers the cost by less than this fraction.
    pub f_tol: f64,
    pub initial_lambda: f64,
    pub lambda_factor: f64,
    /// Lower bound on every `dt` after the first.
    pub dt_min: f64,
    pub cauchy_scale: f64,
    /// Samples per tether in the tether-obstacle residual.
    pub tether_samples: usize,
    /// Central-difference step for field-dependent residuals.
    pub fd_step: f64,
    /// Hold every UGV height at its initial value. With all heights free the
    /// tether-obstacle term lifts the UGV off the ground until the
    /// traversability term balances it, some 0.2 m under the default weights.
    pub fix_ugv_height: bool,
    pub tether: TetherConfig,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            weights: Weights::default(),
            max_iters: 1000,
            g_tol: 1e-8,
            f_tol: 1e-8,
            initial_lambda: 1e-4,
            lambda_factor: 10.0,
            dt_min: 0.01,
            cauchy_scale: 1.0,
            tether_samples: 20,
            fd_step: 1e-4,
            fix_ugv_height: true,
            tether: TetherConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OptimizeError {
    #[error("cost is not finite; first offending residual family: {family}")]
    DivergedNumerically { family: Family },
    #[error("no collision-free tether for state {index} after spreading grouped waypoints")]
    CatenaryLost { index: usize },
    #[error("invalid optimizer input: {0}")]
    InvalidInput(String),
}

/// Why the solver stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    GradientTolerance,
    FunctionTolerance,
    MaxIterations,
    /// Damping grew past its cap without finding a cheaper step.
    NoProgress,
    /// Nothing to optimize (fewer than two states).
    Trivial,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizeReport {
    pub initial_cost: f64,
    pub final_cost: f64,
    /// Solver iterations, counting rejected trial steps.
    pub iterations: usize,
    pub accepted_steps: usize,
    pub termination: Termination,
    /// Robustified cost per family at the solution, indexed by [`Family::index`].
    pub family_costs: [f64; 13],
}

/// Packs a trajectory into the solver's variable vector.
pub fn pack(traj: &[TrajectoryState]) -> Vec<f64> {
    let mut x = Vec::with_capacity(traj.len() * STATE_DIM);
    for s in traj {
        x.extend_from_slice(&[s.p_g.x, s.p_g.y, s.p_g.z, s.p_a.x, s.p_a.y, s.p_a.z, s.l, s.dt]);
    }
    x
}

pub fn unpack(x: &[f64]) -> Vec<TrajectoryState> {
    x.chunks_exact(STATE_DIM)
        .map(|c| TrajectoryState { p_g: Point3::from_slice(&c[0..3]), p_a: Point3::from_slice(&c[3..6]), l: c[6], dt: c[7] })
        .collect()
}

/// Tether polyline for a state, solved at `max(l, chord)` so infeasibly
/// short lengths still give a curve.
pub fn tether_polyline(p_g: &Point3, p_a: &Point3, l: f64, tether: &TetherConfig, samples: SampleCount) -> Vec<Point3> {
    let attach = tether.attach(p_g);
    let chord = attach.distance(p_a);
    let length = effective_length(l, chord);
    let m = samples.for_length(length).max(2);
    match tether_shape(attach, *p_a, length, SampleCount::Fixed(m)) {
        Ok(shape) if shape.samples.len() == m => shape.samples,
        _ => (0..m).map(|j| attach.lerp(p_a, j as f64 / (m - 1) as f64)).collect(),
    }
}

/// Relative width of the smooth transition between slack and taut tethers.
pub const SLACK_BLEND: f64 = 2e-3;

/// Length at which the optimizer evaluates a tether of nominal length `l`.
///
/// Catenary sag grows like the square root of the slack, so the shape has an
/// unbounded slope at `l = chord` and a kink where `l` drops below it. A smooth
/// maximum of `l` and the chord, kept just inside the catenary regime, removes
/// both at the cost of a few centimeters of extra sag on near-taut tethers.
pub fn effective_length(l: f64, chord: f64) -> f64 {
    let w = SLACK_BLEND * chord;
    let smooth_max = 0.5 * (l + chord + ((l - chord).powi(2) + w * w).sqrt());
    smooth_max + 1.01 * TAUT_EPSILON * chord
}

/// Minimizes the robustified trajectory cost with Levenberg-Marquardt.
///
/// The positions of the first and last state never change, `dt` of the first
/// state stays zero, the other `dt` are kept at or above `dt_min` and tether
/// lengths non-negative. The returned cost is never above the initial cost.
pub fn optimize(
    initial: &[TrajectoryState],
    env: &Environment,
    thresholds: &Thresholds,
    cfg: &OptimizerConfig,
) -> Result<(Vec<TrajectoryState>, OptimizeReport), OptimizeError> {
    cfg.weights.validate().map_err(OptimizeError::InvalidInput)?;
    thresholds.validate().map_err(OptimizeError::InvalidInput)?;
    if !(cfg.dt_min > 0.0) || !(cfg.cauchy_scale > 0.0) || cfg.tether_samples < 2 {
        return Err(OptimizeError::InvalidInput("dt_min, cauchy_scale and tether_samples must be positive".into()));
    }
    if initial.iter().any(|s| !(s.p_g.is_finite() && s.p_a.is_finite() && s.l.is_finite() && s.dt.is_finite())) {
        return Err(OptimizeError::InvalidInput("trajectory contains non-finite values".into()));
    }
    if initial.iter().skip(1).any(|s| s.dt <= 0.0) {
        return Err(OptimizeError::InvalidInput("every dt after the first must be positive".into()));
    }

    let model = CostModel::new(env, thresholds, cfg, initial.len());
    let mut x = pack(initial);
    let (mut cost, mut families) = model.cost(&x);
    if !cost.is_finite() {
        let family = Family::ALL.into_iter().find(|f| !families[f.index()].is_finite()).unwrap_or(Family::TetherObstacle);
        return Err(OptimizeError::DivergedNumerically { family });
    }
    let initial_cost = cost;
    let mut report = OptimizeReport {
        initial_cost,
        final_cost: cost,
        iterations: 0,
        accepted_steps: 0,
        termination: Termination::Trivial,
        family_costs: families,
    };
    if initial.len() < 2 {
        return Ok((initial.to_vec(), report));
    }

    let mut lambda = cfg.initial_lambda;
    let mut system = model.normal_equations(&x);
    report.termination = Termination::MaxIterations;
    while report.iterations < cfg.max_iters {
        if system.gradient_norm() < cfg.g_tol {
            report.termination = Termination::GradientTolerance;
            break;
        }
        report.iterations += 1;
        let Some(step) = system.solve_damped(lambda) else {
            lambda *= cfg.lambda_factor;
            if lambda > 1e16 {
                report.termination = Termination::NoProgress;
                break;
            }
            continue;
        };
        let mut trial = x.clone();
        for (v, d) in trial.iter_mut().zip(&step) {
            // skipping zero steps keeps pinned values bit-identical, -0.0 included
            if *d != 0.0 {
                *v += d;
            }
        }
        model.project(&mut trial);
        let (trial_cost, trial_families) = model.cost(&trial);
        if trial_cost.is_finite() && trial_cost < cost {
            let decrease = (cost - trial_cost) / cost.max(f64::MIN_POSITIVE);
            // Marquardt's rule: relax damping only when the model predicted
            // the decrease well, tighten it when the fit was poor
            let taken: Vec<f64> = trial.iter().zip(&x).map(|(a, b)| a - b).collect();
            let ratio = (cost - trial_cost) / system.predicted_decrease(&taken).max(f64::MIN_POSITIVE);
            if ratio > 0.75 {
                lambda = (lambda / cfg.lambda_factor).max(1e-12);
            } else if ratio < 0.25 {
                lambda *= cfg.lambda_factor;
            }
            x = trial;
            cost = trial_cost;
            families = trial_families;
            report.accepted_steps += 1;
            // a tiny decrease only means convergence when the model fit;
            // after a poor fit it just reflects heavy damping
            if decrease < cfg.f_tol && ratio >= 0.25 {
                report.termination = Termination::FunctionTolerance;
                break;
            }
            system = model.normal_equations(&x);
        } else {
            lambda *= cfg.lambda_factor;
            if lambda > 1e16 {
                report.termination = Termination::NoProgress;
                break;
            }
        }
    }
    report.final_cost = cost;
    report.family_costs = families;
    Ok((unpack(&x), report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::environment::EnvironmentConfig;
    use crate::geometry::Aabb;
    use crate::synth::CloudBuilder;
    use proptest::prelude::*;
    use std::sync::OnceLock;

    // open floor with low side walls at y = +-3.5, mirror symmetric in y
    fn open_floor() -> &'static Environment {
        static ENV: OnceLock<Environment> = OnceLock::new();
        ENV.get_or_init(|| {
            let mut b = CloudBuilder::new(0.1);
            b.horizontal((-2.0, 16.0), (-3.5, 3.5), 0.0, None).wall_y(-3.5, (-2.0, 16.0), (0.1, 1.0)).wall_y(3.5, (-2.0, 16.0), (0.1, 1.0));
            let cloud = b.build();
            let bounds = Aabb::new(Point3::new(-2.5, -4.0, -0.5), Point3::new(16.5, 4.0, 5.0));
            Environment::build(&cloud, bounds, Point3::ZERO, &EnvironmentConfig::default()).unwrap()
        })
    }

    fn straight(n: usize, dt: f64) -> Vec<TrajectoryState> {
        (0..n)
            .map(|i| TrajectoryState {
                p_g: Point3::new(i as f64, 0.0, 0.0),
                p_a: Point3::new(i as f64, 0.0, 3.0),
                l: 3.0,
                dt: if i == 0 { 0.0 } else { dt },
            })
            .collect()
    }

    fn no_tether_obstacle() -> OptimizerConfig {
        let mut cfg = OptimizerConfig::default();
        cfg.weights.ot = 0.0;
        cfg
    }

    fn mean_speeds(t: &[TrajectoryState]) -> (f64, f64) {
        let k = (t.len() - 1) as f64;
        let g: f64 = t.windows(2).map(|w| w[0].p_g.distance(&w[1].p_g) / w[1].dt).sum();
        let a: f64 = t.windows(2).map(|w| w[0].p_a.distance(&w[1].p_a) / w[1].dt).sum();
        (g / k, a / k)
    }

    #[test]
    fn ideal_trajectory_is_a_fixed_point() {
        let env = open_floor();
        let init = straight(11, 1.0);
        let thr = Thresholds::for_trajectory(&init);
        let (out, rep) = optimize(&init, env, &thr, &no_tether_obstacle()).unwrap();
        assert_eq!(rep.termination, Termination::GradientTolerance);
        assert_eq!(rep.iterations, 0);
        assert_eq!(pack(&out), pack(&init));
    }

    #[test]
    fn slow_start_speeds_up_to_target() {
        let env = open_floor();
        let init = straight(11, 2.0);
        let (g0, a0) = mean_speeds(&init);
        assert!((g0 - 0.5).abs() < 1e-12 && (a0 - 0.5).abs() < 1e-12);
        let thr = Thresholds::for_trajectory(&init);
        let (out, _) = optimize(&init, env, &thr, &no_tether_obstacle()).unwrap();
        let (g, a) = mean_speeds(&out);
        assert!((g - 1.0).abs() <= 0.1, "ugv {g}");
        assert!((a - 1.0).abs() <= 0.1, "uav {a}");
    }

    fn wobbly(n: usize, amp: f64) -> Vec<TrajectoryState> {
        (0..n)
            .map(|i| {
                let s = (i as f64 * 1.7).sin() * amp;
                TrajectoryState {
                    p_g: Point3::new(i as f64 * 0.8 + 0.3 * s, 0.5 * s, 0.0),
                    p_a: Point3::new(i as f64 * 0.8 - 0.2 * s, 0.3 + s, 2.5 + 0.5 * s),
                    l: 2.4 + s.abs(),
                    dt: if i == 0 { 0.0 } else { 0.6 + 0.3 * s.abs() },
                }
            })
            .collect()
    }

    #[test]
    fn endpoints_stay_pinned() {
        let env = open_floor();
        let init = wobbly(12, 0.8);
        let thr = Thresholds::for_trajectory(&init);
        let cfg = OptimizerConfig { max_iters: 50, ..Default::default() };
        let (out, rep) = optimize(&init, env, &thr, &cfg).unwrap();
        assert!(rep.accepted_steps > 0);
        let (x0, x1) = (pack(&init), pack(&out));
        let last = (init.len() - 1) * STATE_DIM;
        for k in 0..6 {
            assert_eq!(x1[k].to_bits(), x0[k].to_bits());
            assert_eq!(x1[last + k].to_bits(), x0[last + k].to_bits());
        }
        assert_eq!(out[0].dt.to_bits(), 0.0f64.to_bits());
        assert!(out.iter().skip(1).all(|s| s.dt >= cfg.dt_min && s.l >= 0.0));
        // ugv heights are held by default
        assert!(out.iter().zip(&init).all(|(a, b)| a.p_g.z == b.p_g.z));
    }

    #[test]
    fn cost_never_increases_and_report_matches() {
        let env = open_floor();
        for amp in [0.0, 0.4, 1.2] {
            let init = wobbly(9, amp);
            let thr = Thresholds::for_trajectory(&init);
            let cfg = OptimizerConfig::default();
            let (out, rep) = optimize(&init, env, &thr, &cfg).unwrap();
            assert!(rep.final_cost <= rep.initial_cost);
            let model = CostModel::new(env, &thr, &cfg, init.len());
            let (c0, _) = model.cost(&pack(&init));
            let (c1, fam) = model.cost(&pack(&out));
            assert_eq!(c0, rep.initial_cost);
            assert_eq!(c1, rep.final_cost);
            assert_eq!(fam, rep.family_costs);
        }
    }

    #[test]
    fn mirrored_problem_gives_mirrored_solution() {
        let env = open_floor();
        let init = wobbly(10, 0.6);
        let mirror = |t: &[TrajectoryState]| -> Vec<TrajectoryState> {
            t.iter()
                .map(|s| TrajectoryState {
                    p_g: Point3::new(s.p_g.x, -s.p_g.y, s.p_g.z),
                    p_a: Point3::new(s.p_a.x, -s.p_a.y, s.p_a.z),
                    ..*s
                })
                .collect()
        };
        let thr = Thresholds::for_trajectory(&init);
        // rounding differences between the two runs grow with every iteration
        // of this nonconvex problem, so compare the first few steps only
        let cfg = OptimizerConfig { max_iters: 5, ..Default::default() };
        let (a, _) = optimize(&init, env, &thr, &cfg).unwrap();
        let (b, _) = optimize(&mirror(&init), env, &thr, &cfg).unwrap();
        for (u, v) in pack(&a).iter().zip(pack(&mirror(&b))) {
            assert!((u - v).abs() < 1e-9, "{u} vs {v}");
        }
    }

    #[test]
    fn rejects_bad_input() {
        let env = open_floor();
        let mut init = straight(4, 1.0);
        let thr = Thresholds::for_trajectory(&init);
        init[2].dt = 0.0;
        assert!(matches!(optimize(&init, env, &thr, &OptimizerConfig::default()), Err(OptimizeError::InvalidInput(_))));
        init[2].dt = f64::NAN;
        assert!(matches!(optimize(&init, env, &thr, &OptimizerConfig::default()), Err(OptimizeError::InvalidInput(_))));
        let mut cfg = OptimizerConfig::default();
        cfg.weights.ag = 1.5;
        assert!(optimize(&straight(4, 1.0), env, &thr, &cfg).is_err());
    }

    #[test]
    fn effective_length_is_smooth_max() {
        for chord in [0.5, 2.0, 10.0] {
            assert!(effective_length(chord * 2.0, chord) > chord * 2.0);
            assert!((effective_length(chord * 2.0, chord) - chord * 2.0) < 2e-3 * chord);
            assert!(effective_length(0.0, chord) > chord);
            assert!(effective_length(chord, chord) > chord * (1.0 + TAUT_EPSILON));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        // for small residuals the Cauchy kernel reduces to the plain weighted square
        #[test]
        fn kernel_matches_plain_cost_for_small_residuals(amp in 0.0..0.02f64, scale in 1e3..1e4f64) {
            let env = open_floor();
            let init = wobbly(8, amp);
            let thr = Thresholds::for_trajectory(&init);
            let cfg = OptimizerConfig { cauchy_scale: scale, ..Default::default() };
            let model = CostModel::new(env, &thr, &cfg, init.len());
            let x = pack(&init);
            let (_, robust) = model.cost(&x);
            let plain = model.plain_cost(&x);
            for f in Family::ALL {
                let (r, p) = (robust[f.index()], plain[f.index()]);
                prop_assert!(r <= p + 1e-12);
                prop_assert!((r - p).abs() <= 1e-2 * p.max(1e-12), "{f}: {r} vs {p}");
            }
        }
    }
}
