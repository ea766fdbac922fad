//! Solves the same instance with the built-in engine and with an external
//! DIMACS solver, then checks that both agree.
//!
//! Run with `cargo run --example external_backend -- dimacs:/usr/bin/kissat`
//! or set `DFA_DECOMP_SOLVER` and pass `dimacs`.

use std::time::Duration;

use dfa_decomp::{
    generate_sample, solve_tuple, Apta, Backend, GenerateOptions, PartialOrderTask, SizeTuple, TupleOutcome,
};

fn describe(outcome: &TupleOutcome) -> &'static str {
    match outcome {
        TupleOutcome::Sat(_) => "sat",
        TupleOutcome::Unsat => "unsat",
        TupleOutcome::Timeout => "timeout",
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = std::env::args().nth(1).unwrap_or_else(|| "dimacs".into());
    let task = PartialOrderTask::toy();
    let sample = generate_sample(&task, 30, 0, &GenerateOptions::default())?;
    let apta = Apta::build(&sample);
    let budget = Some(Duration::from_secs(30));

    let external = match spec.parse::<Backend>() {
        Ok(backend) => Some(backend),
        Err(e) => {
            eprintln!("external solver unavailable ({e}); running the built-in engine only");
            None
        }
    };
    for sizes in [vec![2, 2], vec![3, 3]] {
        let sizes = SizeTuple::new(sizes)?;
        let internal = solve_tuple(&apta, &sizes, true, &Backend::Internal, budget)?;
        print!("{sizes}: internal {}", describe(&internal));
        if let Some(backend) = &external {
            let other = solve_tuple(&apta, &sizes, true, backend, budget)?;
            print!(", {backend} {}", describe(&other));
            if let TupleOutcome::Sat(d) = &other {
                assert!(sample.is_consistent(d)?);
            }
        }
        println!();
    }
    Ok(())
}
