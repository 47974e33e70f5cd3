//! Run a small generated corpus under full grounding and rule-based pruning,
//! then print the per-run CSV and one scatter table.
//!
//! ```bash
//! cargo run --release --example benchmark_csv [OUT_DIR]
//! ```

use pddl_prune::bench::{
    emit_csv, emit_scatter, run_benchmark, write_results, BenchConfig, BenchTask, GeneratorSpec, Method, Metric,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let specs = [
        GeneratorSpec::Blocksworld4 { blocks: 4, seed: 1 },
        GeneratorSpec::Blocksworld5 { blocks: 5, seed: 2 },
        GeneratorSpec::ZenoLike { cities: 3, persons: 5, goal_persons: 2, aircraft: 2, fuel_levels: 3, seed: 3 },
        GeneratorSpec::Chain { length: 8, ornaments: 4, shortcuts: 1, seed: 4 },
    ];
    let tasks = specs.iter().map(BenchTask::generated).collect::<Result<Vec<_>, _>>()?;
    let config = BenchConfig { time_bound_secs: 20.0, ..BenchConfig::default() };

    let records = run_benchmark(&tasks, &[Method::Fg, Method::SpgRule], &config, None);
    print!("{}", emit_csv(&records));
    println!();
    print!("{}", emit_scatter(&records, Metric::GroundedActions, Method::SpgRule));

    if let Some(dir) = std::env::args().nth(1) {
        write_results(dir.as_ref(), &records, &config)?;
        println!("\nresults written to {dir}");
    }
    Ok(())
}
