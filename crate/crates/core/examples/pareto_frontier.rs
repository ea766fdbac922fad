//! Enumerates the Pareto frontier of size tuples for the toy task and
//! lists the tuples that were solved on the way.
//!
//! Run with `cargo run --release --example pareto_frontier -- [COUNT] [JOBS]`.

use dfa_decomp::pareto::Verdict;
use dfa_decomp::{
    generate_sample, minimize, product, search_frontier, GenerateOptions, PartialOrderTask, SearchOptions,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let count: usize = args.next().map(|a| a.parse()).transpose()?.unwrap_or(60);
    let jobs: usize = args.next().map(|a| a.parse()).transpose()?.unwrap_or(1);

    let task = PartialOrderTask::toy();
    let sample = generate_sample(&task, count, 0, &GenerateOptions::default())?;
    let opts = SearchOptions {
        jobs,
        ..SearchOptions::default()
    };
    let frontier = search_frontier(&sample, 2, &opts)?;

    for visit in &frontier.visits {
        let verdict = match visit.verdict {
            Verdict::Sat => "sat",
            Verdict::Unsat => "unsat",
            Verdict::Timeout => "timeout",
        };
        println!(
            "{:<8} {verdict:<8} {:>8.2} ms",
            visit.sizes.to_string(),
            visit.wall.as_secs_f64() * 1e3
        );
    }
    println!("frontier (complete: {}):", frontier.is_complete());
    for entry in &frontier.entries {
        let merged = minimize(&product(&entry.witness)).num_states();
        println!("  {} with an equivalent monolithic DFA of {merged} states", entry.sizes);
    }
    Ok(())
}
