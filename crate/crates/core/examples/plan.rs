//! Plans a joint UGV/UAV path on a bundled scenario and prints it.
//!
//! cargo run --release --example plan -- [scenario.txt] [seed]

use marsupial::environment::load_point_cloud;
use marsupial::planner::{plan, validate_path, JointState, PlannerConfig};
use marsupial::scenario::Scenario;
use marsupial::{Environment, EnvironmentConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let path = args.next().unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/corridor.txt").into());
    let seed = args.next().map(|s| s.parse()).transpose()?.unwrap_or(0);
    let s = Scenario::load(&path)?;
    let env = Environment::build(&load_point_cloud(&s.cloud_path)?, s.bounds, s.start_ugv, &EnvironmentConfig::default())?;

    let mut cfg = PlannerConfig { rng_seed: seed, ..Default::default() };
    cfg.tether.l_max = s.l_max;
    let p = plan(JointState { p_g: s.start_ugv, p_a: s.start_uav }, s.goal_uav, &env, &cfg)?;
    println!(
        "{} seed {seed}: {} states, cost {:.2}, UGV {:.2} m, UAV {:.2} m, {} iterations, {} nodes, valid {}",
        s.name,
        p.states.len(),
        p.cost,
        p.ugv_length,
        p.uav_length,
        p.iterations,
        p.tree_size,
        validate_path(&p, &env, &cfg)
    );
    for st in &p.states {
        let (g, a) = (st.p_g, st.p_a);
        println!("  ugv ({:.2}, {:.2}, {:.2})  uav ({:.2}, {:.2}, {:.2})  tether {:.2}", g.x, g.y, g.z, a.x, a.y, a.z, st.tether_len);
    }
    Ok(())
}
