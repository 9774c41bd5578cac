//! Plans, then optimizes the trajectory and prints what changed.
//!
//! cargo run --release --example optimize -- [scenario.txt] [seed]

use marsupial::environment::load_point_cloud;
use marsupial::optimizer::{
    check_feasibility, optimize, prepare_initial_trajectory, OptimizerConfig, PrepareConfig, Thresholds, FEASIBILITY_STEP,
};
use marsupial::planner::{plan, JointState, PlannerConfig};
use marsupial::scenario::{acceleration_series, speed_series, Scenario};
use marsupial::{Environment, EnvironmentConfig};

fn mean_abs(v: &[f64]) -> f64 {
    v.iter().map(|x| x.abs()).sum::<f64>() / v.len().max(1) as f64
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let path = args.next().unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/corridor.txt").into());
    let seed = args.next().map(|s| s.parse()).transpose()?.unwrap_or(0);
    let s = Scenario::load(&path)?;
    let env = Environment::build(&load_point_cloud(&s.cloud_path)?, s.bounds, s.start_ugv, &EnvironmentConfig::default())?;

    let mut pcfg = PlannerConfig { rng_seed: seed, ..Default::default() };
    pcfg.tether.l_max = s.l_max;
    let path = plan(JointState { p_g: s.start_ugv, p_a: s.start_uav }, s.goal_uav, &env, &pcfg)?;
    let initial = prepare_initial_trajectory(&path.states, &env.edf, &PrepareConfig { tether: pcfg.tether, ..Default::default() })?;
    let thr = Thresholds::for_trajectory(&initial);
    let cfg = OptimizerConfig { tether: pcfg.tether, ..Default::default() };
    let (opt, report) = optimize(&initial, &env, &thr, &cfg)?;
    println!(
        "cost {:.3} -> {:.3} after {} iterations ({:?})",
        report.initial_cost, report.final_cost, report.iterations, report.termination
    );

    for (name, t) in [("initial", &initial), ("optimized", &opt)] {
        let f = check_feasibility(t, &env.edf, &env.ugv_edf, &pcfg.tether, &thr, FEASIBILITY_STEP);
        println!(
            "{name:9} duration {:6.2} s  UGV v {:.2} |a| {:.3}  UAV v {:.2} |a| {:.3}  feasible {} (tether clearance {:.2} m)",
            t.iter().map(|s| s.dt).sum::<f64>(),
            mean_abs(&speed_series(t, |s| s.p_g)),
            mean_abs(&acceleration_series(t, |s| s.p_g)),
            mean_abs(&speed_series(t, |s| s.p_a)),
            mean_abs(&acceleration_series(t, |s| s.p_a)),
            f.feasible,
            f.min_tether_clearance
        );
    }
    Ok(())
}
