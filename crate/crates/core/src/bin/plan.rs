//! Batch front end: plans and optimizes a scenario for a range of seeds.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use marsupial::scenario::{export, run_batch, write_batch_summary, BatchSummary, EnvCache, PipelineConfig, Scenario, ScenarioError};

#[derive(Parser, Debug)]
#[command(name = "plan", about = "Plan and optimize tethered UGV-UAV trajectories")]
struct Args {
    #[arg(long)]
    scenario: PathBuf,
    /// First seed; runs use seed, seed+1, ...
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    runs: u64,
    #[arg(long, default_value_t = 50_000)]
    max_rrt_iters: usize,
    #[arg(long, default_value_t = 1000)]
    max_opt_iters: usize,
    /// Per-run results go to <out>/seed_<n>/, the batch summary to <out>/summary.txt.
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    skip_optimizer: bool,
    /// `key = value` parameter overrides.
    #[arg(long)]
    params: Option<PathBuf>,
}

fn run(args: &Args) -> Result<usize, ScenarioError> {
    let scenario = Scenario::load(&args.scenario)?;
    let mut cfg = PipelineConfig { skip_optimizer: args.skip_optimizer, ..Default::default() };
    if let Some(p) = &args.params {
        cfg.load_params(p)?;
    }
    cfg.planner.max_iters = args.max_rrt_iters;
    cfg.optimizer.max_iters = args.max_opt_iters;

    let cache = EnvCache::new();
    let env = cache.get(&scenario, &cfg.environment)?;
    let results = run_batch(&scenario, &cache, &cfg, args.seed..args.seed + args.runs)?;

    let mut reports = Vec::new();
    let mut lines = Vec::new();
    for (seed, res) in &results {
        match res {
            Ok(run) => {
                let m = &run.metrics;
                export(&args.out.join(format!("seed_{seed}")), &run.trajectory, m, &env, &run.tether)?;
                let line = format!(
                    "seed {seed}: feasible {} tci {:.3} s tco {:.3} s vto {:.2}/{:.2} m/s ato {:.3}/{:.3} m/s^2",
                    m.feasibility, m.tci, m.tco, m.vto.ugv.mean, m.vto.uav.mean, m.ato.ugv.mean, m.ato.uav.mean
                );
                println!("{line}");
                lines.push(line);
                reports.push(*m);
            }
            Err(e) => {
                let line = format!("seed {seed}: failed: {e}");
                eprintln!("{line}");
                lines.push(line);
            }
        }
    }
    let summary = BatchSummary::new(results.len(), &reports);
    write_batch_summary(&args.out, &summary, &lines)?;
    println!(
        "{}: {}/{} planned, {}/{} feasible ({:.1}%)",
        scenario.name, summary.planned, summary.runs, summary.feasible, summary.runs, summary.feasibility_pct
    );
    Ok(summary.planned)
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(planned) if planned > 0 => ExitCode::SUCCESS,
        Ok(_) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
