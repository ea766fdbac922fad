//! Partially-ordered task generators and the scaling benchmark harness.
//!
//! A task is a conjunction of ordering constraints "`before` is observed
//! and later `after` is observed". Each constraint is a 3-state DFA:
//!
//! ```text
//! WAIT --before--> SEEN --after--> DONE (accepting, absorbing)
//! ```
//!
//! with every other symbol looping in place. The ground truth of a task with
//! `k` pairs is the decomposition of its `k` ordering DFAs.

use std::collections::BTreeSet;
use std::io::Write;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::automata::{minimize, product, Alphabet, Decomposition, Dfa, Symbol, Word};
use crate::error::{GenerateError, SearchError};
use crate::pareto::{search_frontier, Frontier, SearchOptions, SizeTuple};
use crate::sample::LabeledSample;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OrderingPair {
    pub before: Symbol,
    pub after: Symbol,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialOrderTask {
    alphabet: Alphabet,
    pairs: Vec<OrderingPair>,
}

impl PartialOrderTask {
    pub fn new(alphabet: Alphabet, pairs: Vec<OrderingPair>) -> Result<Self, GenerateError> {
        if pairs.is_empty() {
            return Err(GenerateError::NoPairs);
        }
        for pair in &pairs {
            for s in [pair.before, pair.after] {
                if !alphabet.contains(s) {
                    return Err(crate::error::AutomatonError::SymbolOutOfRange {
                        symbol: s.0,
                        size: alphabet.len(),
                    }
                    .into());
                }
            }
            if pair.before == pair.after {
                return Err(GenerateError::DegeneratePair(alphabet.label(pair.before).to_string()));
            }
        }
        Ok(Self { alphabet, pairs })
    }

    /// Builds a task from label pairs such as `[("y", "r"), ("b", "n")]`.
    pub fn from_labels(alphabet: Alphabet, pairs: &[(&str, &str)]) -> Result<Self, GenerateError> {
        let pairs = pairs
            .iter()
            .map(|(b, a)| {
                Ok(OrderingPair {
                    before: alphabet.symbol(b)?,
                    after: alphabet.symbol(a)?,
                })
            })
            .collect::<Result<Vec<_>, GenerateError>>()?;
        Self::new(alphabet, pairs)
    }

    /// The two-pair example over `y r b n`: `y` before `r`, `b` before `n`.
    pub fn toy() -> Self {
        let alphabet = Alphabet::new(["y", "r", "b", "n"]).expect("static alphabet");
        Self::from_labels(alphabet, &[("y", "r"), ("b", "n")]).expect("static task")
    }

    /// A random task over the numeric alphabet of `alphabet_size` symbols.
    ///
    /// Pairs are drawn from all ordered pairs of distinct symbols without
    /// replacement; once every pair is used, drawing restarts.
    pub fn random<R: Rng>(alphabet_size: usize, num_pairs: usize, rng: &mut R) -> Result<Self, GenerateError> {
        if alphabet_size < 2 {
            return Err(GenerateError::Config(format!(
                "ordering tasks need at least 2 symbols, got {alphabet_size}"
            )));
        }
        let alphabet = Alphabet::numeric(alphabet_size)?;
        let all: Vec<OrderingPair> = (0..alphabet_size as u32)
            .flat_map(|b| {
                (0..alphabet_size as u32)
                    .filter(move |&a| a != b)
                    .map(move |a| OrderingPair {
                        before: Symbol(b),
                        after: Symbol(a),
                    })
            })
            .collect();
        let mut pairs = Vec::with_capacity(num_pairs);
        while pairs.len() < num_pairs {
            let mut round = all.clone();
            round.shuffle(rng);
            pairs.extend(round.into_iter().take(num_pairs - pairs.len()));
        }
        Self::new(alphabet, pairs)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn pairs(&self) -> &[OrderingPair] {
        &self.pairs
    }

    /// The 3-state ordering DFA for one pair.
    pub fn ordering_dfa(&self, pair: OrderingPair) -> Dfa {
        Dfa::from_fn(self.alphabet.clone(), 3, 0, [2], |q, s| match q {
            0 if s == pair.before => 1,
            1 if s == pair.after => 2,
            q => q,
        })
        .expect("ordering DFA is well formed")
    }

    pub fn ground_truth(&self) -> Decomposition {
        let dfas = self.pairs.iter().map(|&p| self.ordering_dfa(p)).collect();
        Decomposition::new(dfas).expect("members share the alphabet and size")
    }

    pub fn ground_truth_sizes(&self) -> SizeTuple {
        SizeTuple::uniform(self.pairs.len(), 3)
    }
}

/// Number of accepted and rejected words of each length `0..=max_len`.
pub fn count_words(dfa: &Dfa, max_len: usize) -> Vec<(u128, u128)> {
    let mut counts = vec![0u128; dfa.num_states()];
    counts[dfa.initial()] = 1;
    let mut out = Vec::with_capacity(max_len + 1);
    for len in 0..=max_len {
        let accepted = dfa
            .accepting_states()
            .fold(0u128, |acc, q| acc.saturating_add(counts[q]));
        let total = (dfa.alphabet().len() as u128)
            .checked_pow(len as u32)
            .unwrap_or(u128::MAX);
        out.push((accepted, total.saturating_sub(accepted)));
        let mut next = vec![0u128; dfa.num_states()];
        for (q, &c) in counts.iter().enumerate() {
            for s in dfa.alphabet().symbols() {
                let t = dfa.next(q, s);
                next[t] = next[t].saturating_add(c);
            }
        }
        counts = next;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GenerateOptions {
    /// Longest word drawn; defaults to `2 * pairs + 2`.
    pub max_len: Option<usize>,
}

/// Draws `count / 2` distinct positive and `count / 2` distinct negative
/// words, labeled by the task's ground truth.
///
/// A candidate word gets a uniformly random length in `0..=max_len` and then
/// uniformly random symbols; candidates for a class that is already full are
/// discarded.
pub fn generate_sample(
    task: &PartialOrderTask,
    count: usize,
    seed: u64,
    options: &GenerateOptions,
) -> Result<LabeledSample, GenerateError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    generate_sample_with(task, count, &mut rng, options)
}

pub fn generate_sample_with<R: Rng>(
    task: &PartialOrderTask,
    count: usize,
    rng: &mut R,
    options: &GenerateOptions,
) -> Result<LabeledSample, GenerateError> {
    if count < 2 || !count.is_multiple_of(2) {
        return Err(GenerateError::BadCount(count));
    }
    let per_class = count / 2;
    let max_len = options.max_len.unwrap_or(2 * task.pairs.len() + 2);
    let truth = task.ground_truth();
    let counts = count_words(&minimize(&product(&truth)), max_len);
    let (accepted, rejected) = counts.iter().fold((0u128, 0u128), |(a, r), &(x, y)| {
        (a.saturating_add(x), r.saturating_add(y))
    });
    for (class, available) in [("positive", accepted), ("negative", rejected)] {
        if available < per_class as u128 {
            return Err(GenerateError::NotEnoughWords {
                class,
                available,
                needed: per_class,
                max_len,
            });
        }
    }

    let width = task.alphabet.len() as u32;
    let mut positives: BTreeSet<Word> = BTreeSet::new();
    let mut negatives: BTreeSet<Word> = BTreeSet::new();
    while positives.len() < per_class || negatives.len() < per_class {
        let len = rng.random_range(0..=max_len);
        let word: Word = (0..len).map(|_| Symbol(rng.random_range(0..width))).collect();
        let class = if truth.accepts_unchecked(&word) {
            &mut positives
        } else {
            &mut negatives
        };
        if class.len() < per_class {
            class.insert(word);
        }
    }
    Ok(LabeledSample::new(task.alphabet.clone(), positives, negatives)?)
}

/// Result of growing a sample until the frontier stops changing.
#[derive(Debug, Clone)]
pub struct Escalation {
    pub count: usize,
    pub sample: LabeledSample,
    pub frontier: Frontier,
    /// Example counts tried, with the frontier tuples each produced.
    pub history: Vec<(usize, Vec<SizeTuple>)>,
}

/// Generates samples of increasing size (same seed) and searches the
/// `n`-frontier for each, where `n` is the number of ordering pairs.
///
/// Stops at the first count whose frontier contains `target` and has the
/// same tuples as the frontier of the previous count. Returns `None` if no
/// count qualifies or a search does not complete.
pub fn escalate(
    task: &PartialOrderTask,
    target: &SizeTuple,
    counts: impl IntoIterator<Item = usize>,
    seed: u64,
    generate: &GenerateOptions,
    search: &SearchOptions,
) -> Result<Option<Escalation>, GenerateError> {
    let mut history: Vec<(usize, Vec<SizeTuple>)> = Vec::new();
    for count in counts {
        let sample = generate_sample(task, count, seed, generate)?;
        let frontier = search_frontier(&sample, task.pairs.len(), search)?;
        if !frontier.is_complete() {
            return Ok(None);
        }
        let tuples = frontier.tuples();
        let stable = history.last().is_some_and(|(_, prev)| *prev == tuples);
        history.push((count, tuples));
        if stable && frontier.get(target.as_slice()).is_some() {
            return Ok(Some(Escalation {
                count,
                sample,
                frontier,
                history,
            }));
        }
    }
    Ok(None)
}

/// One benchmark sweep. Cells are the cross product of alphabet sizes,
/// DFA counts, example counts and seeds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchConfig {
    pub scenario: String,
    pub alphabet_sizes: Vec<usize>,
    pub num_dfas: Vec<usize>,
    pub num_examples: Vec<usize>,
    pub seeds: Vec<u64>,
    /// Budget per search, in milliseconds.
    pub timeout_ms: u64,
    #[serde(default)]
    pub max_len: Option<usize>,
    /// Also run the monolithic (`n = 1`) search on every cell.
    #[serde(default = "default_true")]
    pub baseline: bool,
    #[serde(default = "default_true")]
    pub symmetry_breaking: bool,
    /// Cells solved concurrently.
    #[serde(default = "default_one")]
    pub jobs: usize,
}

fn default_true() -> bool {
    true
}

fn default_one() -> usize {
    1
}

impl BenchConfig {
    /// Scaling in the number of ordering tasks, desk size.
    pub fn q1_desk() -> Self {
        Self {
            scenario: "q1".into(),
            alphabet_sizes: vec![2],
            num_dfas: (2..=6).collect(),
            num_examples: vec![10],
            seeds: vec![0, 1, 2],
            timeout_ms: 60_000,
            max_len: None,
            baseline: true,
            symmetry_breaking: true,
            jobs: 1,
        }
    }

    /// Scaling in the number of examples, desk size.
    pub fn q2_desk() -> Self {
        Self {
            scenario: "q2".into(),
            alphabet_sizes: vec![4],
            num_dfas: vec![2],
            num_examples: (10..=60).step_by(10).collect(),
            seeds: vec![0, 1, 2],
            timeout_ms: 60_000,
            max_len: None,
            baseline: true,
            symmetry_breaking: true,
            jobs: 1,
        }
    }

    /// The full grid: 2 and 4 symbols with 2 to 12 DFAs on 10 examples, then
    /// 2 symbols with 4 DFAs and 4 symbols with 2 DFAs on growing example
    /// counts; 10 seeds and a 10 minute budget throughout.
    pub fn full_grid() -> Vec<Self> {
        let base = |scenario: &str, alphabet: usize, dfas: Vec<usize>, examples: Vec<usize>| Self {
            scenario: scenario.into(),
            alphabet_sizes: vec![alphabet],
            num_dfas: dfas,
            num_examples: examples,
            seeds: (0..10).collect(),
            timeout_ms: 600_000,
            max_len: None,
            baseline: true,
            symmetry_breaking: true,
            jobs: 1,
        };
        vec![
            base("q1", 2, (2..=12).collect(), vec![10]),
            base("q1", 4, (2..=12).collect(), vec![10]),
            base("q2", 2, vec![4], (10..=200).step_by(10).collect()),
            base("q2", 4, vec![2], (10..=200).step_by(10).collect()),
        ]
    }

    pub fn validate(&self) -> Result<(), GenerateError> {
        let empty = [
            ("alphabet_sizes", self.alphabet_sizes.is_empty()),
            ("num_dfas", self.num_dfas.is_empty()),
            ("num_examples", self.num_examples.is_empty()),
            ("seeds", self.seeds.is_empty()),
        ];
        if let Some((name, _)) = empty.iter().find(|(_, e)| *e) {
            return Err(GenerateError::Config(format!("{name} must not be empty")));
        }
        if self.timeout_ms == 0 {
            return Err(GenerateError::Config("timeout_ms must be positive".into()));
        }
        if self.jobs == 0 {
            return Err(GenerateError::Config("jobs must be positive".into()));
        }
        Ok(())
    }

    fn cells(&self) -> Vec<(usize, usize, usize, u64)> {
        let mut cells = Vec::new();
        for &alphabet in &self.alphabet_sizes {
            for &n in &self.num_dfas {
                for &examples in &self.num_examples {
                    for &seed in &self.seeds {
                        cells.push((alphabet, n, examples, seed));
                    }
                }
            }
        }
        cells
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunStatus {
    Ok,
    Timeout,
}

/// One CSV row: a single search on one cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub scenario: String,
    pub n: usize,
    pub alphabet_size: usize,
    pub num_examples: usize,
    pub seed: u64,
    /// Frontier tuples joined by `;`, e.g. `(2,3);(1,5)`.
    pub frontier_tuples: String,
    pub wall_ms: f64,
    pub status: RunStatus,
}

/// Mean over seeds for one setting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub scenario: String,
    pub n: usize,
    pub alphabet_size: usize,
    pub num_examples: usize,
    pub runs: usize,
    pub timeouts: usize,
    pub mean_wall_ms: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    pub fn timeouts(&self) -> usize {
        self.rows.iter().filter(|r| r.status == RunStatus::Timeout).count()
    }

    pub fn summary(&self) -> Vec<SummaryRow> {
        let mut out: Vec<SummaryRow> = Vec::new();
        for row in &self.rows {
            let pos = out.iter().position(|s| {
                s.scenario == row.scenario
                    && s.n == row.n
                    && s.alphabet_size == row.alphabet_size
                    && s.num_examples == row.num_examples
            });
            let entry = match pos {
                Some(i) => &mut out[i],
                None => {
                    out.push(SummaryRow {
                        scenario: row.scenario.clone(),
                        n: row.n,
                        alphabet_size: row.alphabet_size,
                        num_examples: row.num_examples,
                        runs: 0,
                        timeouts: 0,
                        mean_wall_ms: 0.0,
                    });
                    out.last_mut().expect("just pushed")
                }
            };
            entry.mean_wall_ms += row.wall_ms;
            entry.runs += 1;
            if row.status == RunStatus::Timeout {
                entry.timeouts += 1;
            }
        }
        for s in &mut out {
            s.mean_wall_ms /= s.runs as f64;
        }
        out
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), GenerateError> {
        let mut writer = csv::Writer::from_writer(out);
        for row in &self.rows {
            writer.serialize(row)?;
        }
        writer.flush().map_err(csv::Error::from)?;
        Ok(())
    }

    pub fn write_summary_csv<W: Write>(&self, out: W) -> Result<(), GenerateError> {
        let mut writer = csv::Writer::from_writer(out);
        for row in self.summary() {
            writer.serialize(row)?;
        }
        writer.flush().map_err(csv::Error::from)?;
        Ok(())
    }
}

fn run_one(
    scenario: String,
    sample: &LabeledSample,
    n: usize,
    config: &BenchConfig,
    cell: (usize, usize, usize, u64),
) -> Result<BenchRow, SearchError> {
    let budget = Duration::from_millis(config.timeout_ms);
    let opts = SearchOptions {
        symmetry_breaking: config.symmetry_breaking,
        call_timeout: Some(budget),
        global_timeout: Some(budget),
        ..SearchOptions::default()
    };
    let started = Instant::now();
    let frontier = search_frontier(sample, n, &opts)?;
    let wall_ms = started.elapsed().as_secs_f64() * 1000.0;
    let tuples: Vec<String> = frontier.tuples().iter().map(ToString::to_string).collect();
    Ok(BenchRow {
        scenario,
        n,
        alphabet_size: cell.0,
        num_examples: cell.2,
        seed: cell.3,
        frontier_tuples: tuples.join(";"),
        wall_ms,
        status: if frontier.is_complete() {
            RunStatus::Ok
        } else {
            RunStatus::Timeout
        },
    })
}

fn run_cell(config: &BenchConfig, cell: (usize, usize, usize, u64)) -> Result<Vec<BenchRow>, GenerateError> {
    let (alphabet, n, examples, seed) = cell;
    // the task comes from its own stream so the sample stream is the same
    // for every cell with this seed
    let mut task_rng = ChaCha8Rng::seed_from_u64(seed);
    task_rng.set_stream(1);
    let task = PartialOrderTask::random(alphabet, n, &mut task_rng)?;
    let sample = generate_sample(
        &task,
        examples,
        seed,
        &GenerateOptions {
            max_len: config.max_len,
        },
    )?;
    let mut rows = vec![run_one(
        format!("{}-decomposition", config.scenario),
        &sample,
        n,
        config,
        cell,
    )?];
    if config.baseline {
        let mut row = run_one(format!("{}-monolithic", config.scenario), &sample, 1, config, cell)?;
        // keep the cell's DFA count so rows pair up
        row.n = n;
        rows.push(row);
    }
    Ok(rows)
}

/// Runs every cell of `config`. Rows come out in cell order whatever the
/// parallelism.
pub fn run_bench(config: &BenchConfig) -> Result<BenchReport, GenerateError> {
    config.validate()?;
    let cells = config.cells();
    let results: Vec<Result<Vec<BenchRow>, GenerateError>> = if config.jobs > 1 {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.jobs)
            .build()
            .map_err(|e| GenerateError::Config(e.to_string()))?;
        pool.install(|| cells.par_iter().map(|&c| run_cell(config, c)).collect())
    } else {
        cells.iter().map(|&c| run_cell(config, c)).collect()
    };
    let mut report = BenchReport::default();
    for rows in results {
        report.rows.extend(rows?);
    }
    Ok(report)
}
