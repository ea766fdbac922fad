//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Runs without the libtest harness so the lines are
//! always printed.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::*;
use dfa_decomp::cli::frontier_json;
use dfa_decomp::encoding::{encode, EncodeOptions};
use dfa_decomp::pareto::{search_frontier, SearchOptions, SizeTuple};
use dfa_decomp::satgate::Backend;
use dfa_decomp::sizing::{decomposition_dl, dfa_dl};
use dfa_decomp::taskgen::{escalate, run_bench, BenchConfig, Escalation, GenerateOptions, PartialOrderTask, RunStatus};
use dfa_decomp::{minimize, product, Alphabet, Apta, Decomposition, Dfa, LabeledSample};
use rand::Rng;

const TOY_SEED: u64 = 0;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn toy_escalation() -> Result<Escalation, String> {
    let task = PartialOrderTask::toy();
    escalate(
        &task,
        &task.ground_truth_sizes(),
        (10..=60).step_by(10),
        TOY_SEED,
        &GenerateOptions::default(),
        &SearchOptions::default(),
    )
    .map_err(|e| e.to_string())?
    .ok_or_else(|| "frontier did not stabilize with (3,3) by 60 examples".to_string())
}

fn criterion_1(toy: &mut Option<Escalation>) -> Outcome {
    let started = Instant::now();
    let esc = toy_escalation()?;
    let elapsed = started.elapsed();
    let entry = esc.frontier.get(&[3, 3]).ok_or("(3,3) missing from the frontier")?;
    let monolithic = minimize(&product(&entry.witness)).num_states();
    let tuples: Vec<String> = esc.frontier.tuples().iter().map(ToString::to_string).collect();
    *toy = Some(esc.clone());
    check(monolithic == 9, format!("minimized product has {monolithic} states"))?;
    check(elapsed < Duration::from_secs(60), format!("took {elapsed:?}"))?;
    Ok(format!(
        "stable at {} examples, frontier {{{}}}, monolithic product 9 states, {:.1}s",
        esc.count,
        tuples.join(", "),
        elapsed.as_secs_f64()
    ))
}

fn criterion_2() -> Outcome {
    let mut cases = 0;
    for seed in 0..60 {
        let sample = random_monolithic_sample(seed);
        let f = search_frontier(&sample, 1, &SearchOptions::default()).map_err(|e| e.to_string())?;
        let expected = min_consistent_size(&sample);
        check(
            f.tuples() == vec![SizeTuple::new(vec![expected]).unwrap()],
            format!("seed {seed}: frontier {:?}, brute force {expected}", f.tuples()),
        )?;
        cases += 1;
    }
    Ok(format!("{cases}/{cases} samples match the brute-force minimum"))
}

struct Decode {
    sample: LabeledSample,
    witness: Decomposition,
}

fn random_instances() -> Vec<(LabeledSample, SizeTuple)> {
    let mut r = rng(7);
    (0..240u64)
        .map(|i| {
            let sample = if i % 2 == 0 {
                random_pair_sample(10_000 + i)
            } else {
                random_monolithic_sample(10_000 + i)
            };
            let n = r.random_range(1..=3);
            let mut sizes: Vec<usize> = (0..n).map(|_| r.random_range(1..=4)).collect();
            sizes.sort();
            (sample, SizeTuple::new(sizes).unwrap())
        })
        .collect()
}

fn criterion_3(decodes: &mut Vec<Decode>) -> Outcome {
    let instances = random_instances();
    let mut unsat = 0;
    for (i, (sample, sizes)) in instances.iter().enumerate() {
        let apta = Apta::build(sample);
        let enc = encode(&apta, sizes, &EncodeOptions::default());
        let result = Backend::Internal.solve(&enc.cnf, None).map_err(|e| e.to_string())?;
        match result.model() {
            Some(model) => {
                let witness = enc.decode(model).map_err(|e| format!("instance {i}: {e}"))?;
                check(
                    sample.is_consistent(&witness).unwrap(),
                    format!("instance {i}: decoded decomposition is inconsistent"),
                )?;
                decodes.push(Decode {
                    sample: sample.clone(),
                    witness,
                });
            }
            None => unsat += 1,
        }
    }
    Ok(format!(
        "{} instances, {} SAT decodes all consistent, {unsat} UNSAT",
        instances.len(),
        decodes.len()
    ))
}

fn criterion_4(samples: &[LabeledSample], times: &mut Vec<(Duration, Duration)>) -> Outcome {
    for (i, sample) in samples.iter().enumerate() {
        let t = Instant::now();
        let f = search_frontier(sample, 2, &SearchOptions::default()).map_err(|e| e.to_string())?;
        let with = t.elapsed();
        let expected = PairOracle::new(sample).frontier(3);
        check(
            f.tuples() == expected,
            format!("sample {i}: search {:?}, enumeration {expected:?}", f.tuples()),
        )?;
        let opts = SearchOptions {
            symmetry_breaking: false,
            ..SearchOptions::default()
        };
        let t = Instant::now();
        let g = search_frontier(sample, 2, &opts).map_err(|e| e.to_string())?;
        let without = t.elapsed();
        check(
            g.tuples() == f.tuples(),
            format!("sample {i}: symmetry breaking changed the frontier"),
        )?;
        times.push((with, without));
    }
    Ok(format!(
        "{0}/{0} frontiers equal the exhaustive Pareto set",
        samples.len()
    ))
}

fn median(mut xs: Vec<Duration>) -> Duration {
    xs.sort();
    xs[xs.len() / 2]
}

fn criterion_5(times: &[(Duration, Duration)]) -> Outcome {
    check(times.len() >= 30, "criterion 4 did not run on all samples")?;
    let with = median(times.iter().map(|t| t.0).collect());
    let without = median(times.iter().map(|t| t.1).collect());
    Ok(format!(
        "{} frontiers identical with and without symmetry clauses; median search {:.3} ms with, {:.3} ms without",
        times.len(),
        with.as_secs_f64() * 1e3,
        without.as_secs_f64() * 1e3
    ))
}

fn criterion_6(decodes: &[Decode]) -> Outcome {
    let mut relaxed = 0;
    let mut multi = 0;
    for d in decodes.iter().filter(|d| d.witness.len() >= 2) {
        multi += 1;
        let n = d.witness.len();
        let counts: Vec<usize> = d
            .sample
            .negatives()
            .iter()
            .map(|w| d.witness.acceptance_count(w).unwrap())
            .collect();
        check(
            counts.iter().all(|&c| c < n),
            "a negative example is accepted by every member",
        )?;
        if counts.contains(&(n - 1)) {
            relaxed += 1;
        }
    }
    check(relaxed >= 1, "no decode has a negative accepted by exactly n-1 members")?;
    Ok(format!(
        "{relaxed}/{multi} multi-DFA decodes reject some negative through a single member; none accepted by all"
    ))
}

fn criterion_7() -> Outcome {
    let mut r = rng(11);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let k = r.random_range(1..=4);
        let labels: Vec<String> = (0..k).map(|i| format!("s{i}")).collect();
        let alphabet = Alphabet::new(labels).unwrap();
        let m = r.random_range(1..=8);
        let dfa = random_dfa(&mut r, &alphabet, m);
        let single = dfa_dl(&dfa).nats();
        let rel = (decomposition_dl(&Decomposition::from(dfa)).nats() - single).abs() / single.abs();
        worst = worst.max(rel);
    }
    check(worst <= 1e-12, format!("relative error {worst:e}"))?;

    // the two ordering DFAs: m = 3, |Σ| = 4, |F| = 1, z = 2 each
    let truth = PartialOrderTask::toy().ground_truth();
    for d in truth.dfas() {
        check(
            d.num_states() == 3 && d.num_accepting() == 1 && d.non_stuttering_transitions() == 2,
            "ordering DFA counts",
        )?;
    }
    const MEMBER: f64 = 17.334_075_753_824_44;
    const PAIR: f64 = 28.698_338_208_072_88;
    let member = dfa_dl(&truth.dfas()[0]).nats();
    let pair = decomposition_dl(&truth).nats();
    check((member - MEMBER).abs() <= 1e-9, format!("member {member}"))?;
    check((pair - PAIR).abs() <= 1e-9, format!("pair {pair}"))?;

    // a 3-state ordering automaton with two accepting states (WAIT and DONE)
    const TWO_ACCEPTING: f64 = 18.432_688_042_492_55;
    let a = truth.alphabet().clone();
    let (y, r_) = (a.symbol("y").unwrap(), a.symbol("r").unwrap());
    let wait_done_fail = Dfa::from_fn(a, 3, 0, [0, 1], |q, s| match q {
        0 if s == y => 1,
        0 if s == r_ => 2,
        q => q,
    })
    .unwrap();
    let v = dfa_dl(&wait_done_fail).nats();
    check((v - TWO_ACCEPTING).abs() <= 1e-9, format!("two-accepting member {v}"))?;
    Ok(format!(
        "n=1 identity max relative error {worst:.1e} over 100 DFAs; ordering pair {pair:.9} nats"
    ))
}

fn criterion_8() -> Outcome {
    let dir = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("acceptance");
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let mut lines = Vec::new();
    for config in [BenchConfig::q1_desk(), BenchConfig::q2_desk()] {
        let report = run_bench(&config).map_err(|e| e.to_string())?;
        let cells =
            config.alphabet_sizes.len() * config.num_dfas.len() * config.num_examples.len() * config.seeds.len();
        check(
            report.rows.len() == 2 * cells,
            format!("{}: {} rows", config.scenario, report.rows.len()),
        )?;
        check(
            report.timeouts() == 0,
            format!("{}: {} timeouts", config.scenario, report.timeouts()),
        )?;
        check(report.rows.iter().all(|r| r.status == RunStatus::Ok), "status column")?;
        let path = dir.join(format!("{}.csv", config.scenario));
        report
            .write_csv(std::fs::File::create(&path).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        let written = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
        check(written.lines().count() == 2 * cells + 1, "CSV row count")?;
        if config.scenario == "q1" {
            let means: Vec<(usize, f64)> = report
                .summary()
                .into_iter()
                .filter(|s| s.scenario == "q1-decomposition")
                .map(|s| (s.n, s.mean_wall_ms))
                .collect();
            check(
                means.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 <= w[1].1),
                format!("Q1 mean time not monotone in n: {means:?}"),
            )?;
            let shown: Vec<String> = means.iter().map(|(n, t)| format!("n={n}: {t:.1} ms")).collect();
            lines.push(format!("Q1 {}", shown.join(", ")));
        } else {
            lines.push(format!("Q2 {} rows", report.rows.len()));
        }
    }
    Ok(format!("zero timeouts; {}", lines.join("; ")))
}

fn criterion_9(toy: Option<&Escalation>) -> Outcome {
    let esc = match toy {
        Some(e) => e.clone(),
        None => toy_escalation()?,
    };
    let mut outputs = Vec::new();
    for jobs in [1, 1, 4, 4] {
        let opts = SearchOptions {
            jobs,
            ..SearchOptions::default()
        };
        let f = search_frontier(&esc.sample, 2, &opts).map_err(|e| e.to_string())?;
        outputs.push(frontier_json(&f));
    }
    check(
        outputs.windows(2).all(|w| w[0] == w[1]),
        "JSON differs between runs or modes",
    )?;
    check(
        outputs[0] == frontier_json(&esc.frontier),
        "JSON differs from the criterion 1 run",
    )?;
    Ok(format!(
        "4 runs (2 sequential, 2 with 4 workers) byte-identical, {} bytes",
        outputs[0].len()
    ))
}

fn main() {
    let mut toy = None;
    let mut decodes = Vec::new();
    let mut times = Vec::new();
    let capped = capped_pair_samples(30, 20_000);

    let mut results: Vec<(u32, &str, Outcome)> = Vec::new();
    let mut run = |id: u32, name: &'static str, f: &mut dyn FnMut() -> Outcome| {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        println!("criterion {id} {tag} {name}: {detail}");
        results.push((id, name, outcome));
    };

    run(1, "toy example reproduction", &mut || criterion_1(&mut toy));
    run(2, "monolithic reduction", &mut criterion_2);
    run(3, "encoding correctness", &mut || criterion_3(&mut decodes));
    run(4, "pareto soundness and completeness", &mut || {
        criterion_4(&capped, &mut times)
    });
    run(5, "symmetry-breaking equisatisfiability", &mut || criterion_5(&times));
    run(6, "R2 relaxation", &mut || criterion_6(&decodes));
    run(7, "description length", &mut criterion_7);
    run(8, "desk-scale scaling harness", &mut criterion_8);
    run(9, "determinism", &mut || criterion_9(toy.as_ref()));

    let failed = results.iter().filter(|r| r.2.is_err()).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
