//! Classifies the points of a bundled scenario the UGV can drive on.
//!
//! cargo run --release --example traversability -- [scenario.txt]

use marsupial::environment::{analyze_traversability, load_point_cloud, TraversabilityParams};
use marsupial::scenario::Scenario;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args().nth(1).unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/arch.txt").into());
    let scenario = Scenario::load(&path)?;
    let cloud = load_point_cloud(&scenario.cloud_path)?;
    let params = TraversabilityParams::default();
    let tset = analyze_traversability(&cloud, scenario.start_ugv, &params)?;
    let obstacles = tset.obstacle_points(&cloud);
    println!("{}: {} points, {} traversable, {} obstacles for the UGV", scenario.name, cloud.len(), tset.len(), obstacles.len());

    for q in [scenario.start_ugv, scenario.goal_uav] {
        let (d, p) = tset.distance_to_traversable(&q);
        println!("nearest traversable point to {q}: {p} at {d:.2} m");
    }
    Ok(())
}
