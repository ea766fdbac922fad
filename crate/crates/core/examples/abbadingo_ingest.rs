//! Reads an Abbadingo-format sample and finds the smallest consistent DFA.
//!
//! Run with `cargo run --example abbadingo_ingest -- [FILE]`; without a
//! file a built-in sample over `{0, 1}` is used.

use dfa_decomp::automata::to_dot;
use dfa_decomp::{search_frontier, LabeledSample, SearchOptions};

// even number of 1s
const BUILT_IN: &str = "\
8 2
1 0
1 2 1 1
1 3 0 1 1
1 3 1 0 1
0 1 1
0 2 0 1
0 3 1 1 1
0 3 0 0 1
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path)?,
        None => BUILT_IN.to_string(),
    };
    let sample = LabeledSample::from_abbadingo(&text)?;
    println!("{} examples over {} symbols", sample.len(), sample.alphabet().len());

    let frontier = search_frontier(&sample, 1, &SearchOptions::default())?;
    let entry = &frontier.entries[0];
    println!("smallest consistent DFA has {} states", entry.sizes.as_slice()[0]);
    println!("{}", to_dot(&entry.witness.dfas()[0]));

    print!("round trip:\n{}", sample.to_abbadingo());
    Ok(())
}
