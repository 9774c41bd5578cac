//! Writes the bundled synthetic scenarios (scenario file plus point cloud).
//!
//! cargo run --example generate_scenarios -- [out_dir]

use std::path::PathBuf;

use marsupial::environment::write_point_cloud;
use marsupial::scenario::Scenario;
use marsupial::synth;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios"));
    std::fs::create_dir_all(&out)?;
    for s in synth::all(synth::DEFAULT_SPACING) {
        let cloud_file = format!("{}.xyz", s.name);
        // lattice coordinates are multiples of the spacing; two decimals reproduce them
        write_point_cloud(out.join(&cloud_file), &s.cloud, 2, &format!("synthetic {} scenario, x y z in meters", s.name))?;
        let scenario = Scenario {
            name: s.name.to_string(),
            cloud_path: cloud_file.clone().into(),
            bounds: s.bounds,
            start_ugv: s.start_ugv,
            start_uav: s.start_uav,
            goal_uav: s.goal_uav,
            l_max: s.l_max,
        };
        std::fs::write(out.join(format!("{}.txt", s.name)), scenario.to_text(&cloud_file))?;
        println!("{:8} {:6} points -> {}", s.name, s.cloud.len(), out.join(format!("{}.txt", s.name)).display());
    }
    Ok(())
}
