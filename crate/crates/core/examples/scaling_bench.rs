//! Runs a small scaling benchmark comparing decomposed and monolithic
//! identification, and prints the per-cell summary as CSV.
//!
//! Run with `cargo run --release --example scaling_bench -- [CONFIG.toml]`.

use dfa_decomp::taskgen::run_bench;
use dfa_decomp::BenchConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = match std::env::args().nth(1) {
        Some(path) => toml::from_str(&std::fs::read_to_string(path)?)?,
        None => BenchConfig {
            num_dfas: vec![2, 3, 4],
            seeds: vec![0, 1],
            ..BenchConfig::q1_desk()
        },
    };
    config.validate()?;
    let report = run_bench(&config)?;
    eprintln!("{} runs, {} timeouts", report.rows.len(), report.timeouts());
    report.write_summary_csv(std::io::stdout())?;
    Ok(())
}
