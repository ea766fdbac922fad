//! Identifies the two-ordering toy task as a pair of 3-state DFAs and
//! prints each member as Graphviz DOT.
//!
//! Run with `cargo run --example identify_toy -- [COUNT] [SEED]`.

use dfa_decomp::automata::to_dot;
use dfa_decomp::{generate_sample, solve_tuple, Apta, Backend, GenerateOptions, PartialOrderTask, TupleOutcome};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let count: usize = args.next().map(|a| a.parse()).transpose()?.unwrap_or(60);
    let seed: u64 = args.next().map(|a| a.parse()).transpose()?.unwrap_or(0);

    let task = PartialOrderTask::toy();
    let sample = generate_sample(&task, count, seed, &GenerateOptions::default())?;
    println!(
        "{} positives, {} negatives over {{{}}}",
        sample.positives().len(),
        sample.negatives().len(),
        task.alphabet().labels().join(", ")
    );

    let apta = Apta::build(&sample);
    let sizes = task.ground_truth_sizes();
    match solve_tuple(&apta, &sizes, true, &Backend::Internal, None)? {
        TupleOutcome::Sat(decomp) => {
            assert!(sample.is_consistent(&decomp)?);
            println!("found a {sizes} decomposition");
            for dfa in decomp.dfas() {
                println!("{}", to_dot(dfa));
            }
        }
        TupleOutcome::Unsat => println!("no {sizes} decomposition is consistent with the sample"),
        TupleOutcome::Timeout => unreachable!("no budget was set"),
    }
    Ok(())
}
