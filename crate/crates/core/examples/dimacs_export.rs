//! Encodes one size tuple as CNF, reports clause counts per rule family,
//! and writes the DIMACS text for use with any external solver.
//!
//! Run with `cargo run --example dimacs_export -- [OUT.cnf]`.

use std::collections::BTreeMap;

use dfa_decomp::{encode, generate_sample, Apta, EncodeOptions, GenerateOptions, PartialOrderTask, SizeTuple};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let task = PartialOrderTask::toy();
    let sample = generate_sample(&task, 20, 0, &GenerateOptions::default())?;
    let apta = Apta::build(&sample);
    let sizes = SizeTuple::new(vec![3, 3])?;

    for symmetry_breaking in [false, true] {
        let enc = encode(&apta, &sizes, &EncodeOptions { symmetry_breaking });
        println!(
            "symmetry breaking {symmetry_breaking}: {} variables, {} clauses",
            enc.cnf.num_vars(),
            enc.cnf.num_clauses()
        );
        let mut per_family = BTreeMap::new();
        for group in enc.cnf.groups() {
            *per_family.entry(group.family).or_insert(0) += group.clauses.len();
        }
        for (family, clauses) in per_family {
            println!("  {family:?}: {clauses}");
        }
    }

    let dimacs = encode(&apta, &sizes, &EncodeOptions::default()).to_dimacs();
    match std::env::args().nth(1) {
        Some(path) => std::fs::write(&path, &dimacs)?,
        None => {
            for line in dimacs
                .lines()
                .filter(|l| l.starts_with("p ") || l.starts_with("c x"))
                .take(4)
            {
                println!("{line}");
            }
        }
    }
    Ok(())
}
