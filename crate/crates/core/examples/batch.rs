//! Runs the full pipeline over several seeds in parallel and prints the batch
//! summary, the library-level equivalent of the `plan` binary.
//!
//! cargo run --release --example batch -- [scenario.txt] [runs]

use marsupial::scenario::{run_batch, BatchSummary, EnvCache, PipelineConfig, Scenario};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let path = args.next().unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/arch.txt").into());
    let runs: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(8);
    let s = Scenario::load(&path)?;
    let results = run_batch(&s, &EnvCache::new(), &PipelineConfig::default(), 0..runs)?;

    let mut reports = Vec::new();
    for (seed, r) in &results {
        match r {
            Ok(run) => {
                let m = &run.metrics;
                println!(
                    "seed {seed:2}: feasible {:5} tco {:.2} s  UAV {:.2} m/s  tether clearance {:.2} m",
                    m.feasibility, m.tco, m.vto.uav.mean, m.dcoo.min
                );
                reports.push(run.metrics);
            }
            Err(e) => println!("seed {seed:2}: {e}"),
        }
    }
    print!("{}", BatchSummary::new(results.len(), &reports).to_text());
    Ok(())
}
