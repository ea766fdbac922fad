//! Compares the description length of each frontier witness with that of
//! the equivalent monolithic DFA.
//!
//! Run with `cargo run --release --example description_length -- [COUNT]`.

use dfa_decomp::{
    decomposition_dl, dfa_dl, generate_sample, minimize, product, search_frontier, GenerateOptions, PartialOrderTask,
    SearchOptions,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let count: usize = std::env::args().nth(1).map(|a| a.parse()).transpose()?.unwrap_or(60);
    let task = PartialOrderTask::toy();

    let truth = task.ground_truth();
    println!("ground truth {:?}: {}", truth.sizes(), decomposition_dl(&truth));
    println!("as one DFA: {}", dfa_dl(&minimize(&product(&truth))));

    let sample = generate_sample(&task, count, 0, &GenerateOptions::default())?;
    let frontier = search_frontier(&sample, 2, &SearchOptions::default())?;
    let mut best = None;
    for entry in &frontier.entries {
        let dl = decomposition_dl(&entry.witness);
        let merged = dfa_dl(&minimize(&product(&entry.witness)));
        println!("{:<8} decomposed {dl}, merged {merged}", entry.sizes.to_string());
        if best.as_ref().is_none_or(|(_, b)| dl < *b) {
            best = Some((entry.sizes.clone(), dl));
        }
    }
    if let Some((sizes, dl)) = best {
        println!("shortest description: {sizes} at {:.3} nats", dl.nats());
    }
    Ok(())
}
