//! The SAT path agrees with brute force on small instances.

mod common;

use std::time::Duration;

use common::*;
use dfa_decomp::encoding::{encode, EncodeOptions};
use dfa_decomp::pareto::{search_frontier, solve_tuple, SearchOptions, StartTuple, TupleOutcome};
use dfa_decomp::satgate::Backend;
use dfa_decomp::{Apta, Decomposition, LabeledSample, SizeTuple};

fn solve(sample: &LabeledSample, sizes: &[usize], symmetry: bool) -> Option<Decomposition> {
    let apta = Apta::build(sample);
    let tuple = SizeTuple::new(sizes.to_vec()).unwrap();
    match solve_tuple(&apta, &tuple, symmetry, &Backend::Internal, None).unwrap() {
        TupleOutcome::Sat(d) => Some(d),
        TupleOutcome::Unsat => None,
        TupleOutcome::Timeout => unreachable!("no budget was set"),
    }
}

#[test]
fn backtracking_oracle_agrees_with_full_enumeration() {
    for seed in 0..40 {
        let sample = random_monolithic_sample(seed);
        for m in 1..=3 {
            let by_enumeration = all_dfas(sample.alphabet(), m)
                .into_iter()
                .any(|d| sample.is_consistent(&Decomposition::from(d)).unwrap());
            let by_search = find_consistent_dfa(sample.alphabet(), sample.positives(), sample.negatives(), m);
            assert_eq!(by_enumeration, by_search.is_some(), "seed {seed}, m {m}");
            if let Some(d) = by_search {
                assert!(sample.is_consistent(&Decomposition::from(d)).unwrap());
            }
        }
    }
}

#[test]
fn monolithic_satisfiability_matches_oracle_with_and_without_symmetry() {
    for seed in 100..160 {
        let sample = random_monolithic_sample(seed);
        for m in 1..=4 {
            let expected = find_consistent_dfa(sample.alphabet(), sample.positives(), sample.negatives(), m).is_some();
            for symmetry in [true, false] {
                let got = solve(&sample, &[m], symmetry);
                assert_eq!(got.is_some(), expected, "seed {seed}, m {m}, symmetry {symmetry}");
                if let Some(d) = got {
                    assert!(sample.is_consistent(&d).unwrap());
                    assert_eq!(d.sizes(), vec![m]);
                }
            }
        }
    }
}

#[test]
fn pair_satisfiability_matches_oracle() {
    for (i, sample) in capped_pair_samples(12, 500).iter().enumerate() {
        let mut oracle = PairOracle::new(sample);
        for m1 in 1..=3 {
            for m2 in m1..=3 {
                let expected = oracle.exists(m1, m2);
                for symmetry in [true, false] {
                    let got = solve(sample, &[m1, m2], symmetry);
                    assert_eq!(got.is_some(), expected, "sample {i}, ({m1},{m2}), symmetry {symmetry}");
                }
            }
        }
    }
}

#[test]
fn empty_word_positive_single_letter_negative() {
    let sample = LabeledSample::from_labels(Some(&["a"][..]), &[vec![]], &[vec!["a"]]).unwrap();
    let f = search_frontier(&sample, 2, &SearchOptions::default()).unwrap();
    assert_eq!(f.tuples(), vec![SizeTuple::new(vec![1, 2]).unwrap()]);
    assert_eq!(PairOracle::new(&sample).frontier(2), f.tuples());
    let witness = &f.entries[0].witness;
    assert_eq!(witness.dfas()[0].num_states(), 1);
    assert!(witness.dfas()[0].is_accepting(0));
}

#[test]
fn twos_start_misses_universal_members() {
    let sample = LabeledSample::from_labels(Some(&["a"][..]), &[vec![]], &[vec!["a"]]).unwrap();
    let opts = SearchOptions {
        start: StartTuple::Twos,
        ..SearchOptions::default()
    };
    let f = search_frontier(&sample, 2, &opts).unwrap();
    assert_eq!(f.tuples(), vec![SizeTuple::new(vec![2, 2]).unwrap()]);
}

#[test]
fn monolithic_frontier_is_the_minimum_size() {
    for seed in 200..230 {
        let sample = random_monolithic_sample(seed);
        let f = search_frontier(&sample, 1, &SearchOptions::default()).unwrap();
        assert_eq!(
            f.tuples(),
            vec![SizeTuple::new(vec![min_consistent_size(&sample)]).unwrap()],
            "seed {seed}"
        );
    }
}

#[test]
fn pair_frontier_matches_exhaustive_enumeration() {
    for (i, sample) in capped_pair_samples(10, 900).iter().enumerate() {
        let f = search_frontier(sample, 2, &SearchOptions::default()).unwrap();
        assert!(f.is_complete());
        assert_eq!(f.tuples(), PairOracle::new(sample).frontier(3), "sample {i}");
        for e in &f.entries {
            assert!(sample.is_consistent(&e.witness).unwrap());
            assert_eq!(e.witness.sizes(), e.sizes.as_slice());
        }
    }
}

#[test]
fn frontier_is_an_antichain_and_each_tuple_solved_once() {
    for seed in 0..15 {
        let sample = random_pair_sample(seed);
        for n in 1..=3 {
            let f = search_frontier(&sample, n, &SearchOptions::default()).unwrap();
            let tuples = f.tuples();
            for a in &tuples {
                for b in &tuples {
                    assert!(!a.dominates(b).unwrap());
                }
            }
            let mut visited: Vec<_> = f.visits.iter().map(|v| v.sizes.clone()).collect();
            let total = visited.len();
            visited.sort();
            visited.dedup();
            assert_eq!(visited.len(), total, "a tuple was solved twice");
        }
    }
}

#[test]
fn parallel_search_returns_the_same_frontier() {
    for seed in 0..10 {
        let sample = random_pair_sample(seed);
        let seq = search_frontier(&sample, 3, &SearchOptions::default()).unwrap();
        let par = search_frontier(
            &sample,
            3,
            &SearchOptions {
                jobs: 4,
                ..SearchOptions::default()
            },
        )
        .unwrap();
        assert_eq!(seq.report(), par.report(), "seed {seed}");
    }
}

#[test]
fn tiny_budget_marks_the_search_incomplete() {
    let task = dfa_decomp::PartialOrderTask::toy();
    let sample = dfa_decomp::generate_sample(&task, 40, 0, &Default::default()).unwrap();
    let opts = SearchOptions {
        call_timeout: Some(Duration::from_nanos(1)),
        ..SearchOptions::default()
    };
    let f = search_frontier(&sample, 2, &opts).unwrap();
    assert!(!f.is_complete());
    assert!(f.report().incomplete);
}

#[test]
fn dimacs_text_of_an_unsat_instance_is_unsat_under_both_settings() {
    // the (1,1) instance is unsatisfiable whenever there is a negative and a positive
    let sample = LabeledSample::from_labels(Some(&["a", "b"][..]), &[vec!["a"]], &[vec!["b"]]).unwrap();
    let apta = Apta::build(&sample);
    for symmetry in [true, false] {
        let enc = encode(
            &apta,
            &SizeTuple::new(vec![1, 1]).unwrap(),
            &EncodeOptions {
                symmetry_breaking: symmetry,
            },
        );
        let result = Backend::Internal.solve(&enc.cnf, None).unwrap();
        assert!(!result.is_sat());
    }
}
