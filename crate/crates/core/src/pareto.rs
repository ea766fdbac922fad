//! Breadth-first enumeration of the Pareto frontier over size tuples.
//!
//! Vertices are non-decreasing tuples `(m_1, ..., m_n)`; edges increment one
//! coordinate. A satisfiable tuple is a sink and joins the frontier; an
//! unsatisfiable tuple expands to its ordered successors. Tuples dominated
//! by a frontier member are skipped.
//!
//! The search runs layer by layer (a layer is all tuples with one coordinate
//! sum). Tuples of equal sum never dominate each other, so solving a whole
//! layer before updating the frontier gives the same result as one-at-a-time
//! FIFO processing, which is what makes the parallel mode exact.

use std::collections::BTreeSet;
use std::fmt;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::automata::{Decomposition, DecompositionDoc};
use crate::encoding::{encode, EncodeOptions};
use crate::error::{EncodeError, SearchError};
use crate::sample::{Apta, LabeledSample};
use crate::satgate::{Backend, SolveStatus};

/// Per-DFA state counts, non-decreasing, each at least 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct SizeTuple(Vec<usize>);

impl SizeTuple {
    pub fn new(sizes: Vec<usize>) -> Result<Self, EncodeError> {
        if sizes.is_empty() {
            return Err(EncodeError::EmptySizes);
        }
        if sizes.contains(&0) {
            return Err(EncodeError::ZeroSize(sizes));
        }
        if sizes.windows(2).any(|w| w[0] > w[1]) {
            return Err(EncodeError::Unordered(sizes));
        }
        Ok(Self(sizes))
    }

    pub fn uniform(n: usize, size: usize) -> Self {
        assert!(n >= 1 && size >= 1);
        Self(vec![size; n])
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn largest(&self) -> usize {
        *self.0.last().expect("non-empty")
    }

    /// Strict product-order dominance: `self <= other` everywhere and `<`
    /// somewhere.
    pub fn dominates(&self, other: &SizeTuple) -> Result<bool, EncodeError> {
        if self.len() != other.len() {
            return Err(EncodeError::LengthMismatch(self.len(), other.len()));
        }
        let all_le = self.0.iter().zip(&other.0).all(|(a, b)| a <= b);
        Ok(all_le && self.0 != other.0)
    }

    /// Tuples reached by incrementing one coordinate that stay ordered, in
    /// lexicographic order.
    pub fn successors(&self) -> Vec<SizeTuple> {
        let mut out: Vec<SizeTuple> = (0..self.len())
            .filter(|&j| j + 1 == self.len() || self.0[j] < self.0[j + 1])
            .map(|j| {
                let mut next = self.0.clone();
                next[j] += 1;
                SizeTuple(next)
            })
            .collect();
        out.sort();
        out
    }
}

impl TryFrom<Vec<usize>> for SizeTuple {
    type Error = EncodeError;

    fn try_from(sizes: Vec<usize>) -> Result<Self, Self::Error> {
        Self::new(sizes)
    }
}

impl From<SizeTuple> for Vec<usize> {
    fn from(t: SizeTuple) -> Self {
        t.0
    }
}

impl fmt::Display for SizeTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StartTuple {
    /// Start at `(1, ..., 1)`.
    #[default]
    Ones,
    /// Start at `(2, ..., 2)`.
    Twos,
}

impl StartTuple {
    pub fn tuple(self, n: usize) -> SizeTuple {
        match self {
            StartTuple::Ones => SizeTuple::uniform(n, 1),
            StartTuple::Twos => SizeTuple::uniform(n, 2),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOptions {
    pub symmetry_breaking: bool,
    pub start: StartTuple,
    /// Budget for each SAT call.
    pub call_timeout: Option<Duration>,
    /// Budget for the whole search.
    pub global_timeout: Option<Duration>,
    /// Largest per-DFA size the search may reach; defaults to `|APTA| + 1`.
    pub size_cap: Option<usize>,
    /// Worker threads for intra-layer solving; 1 is sequential.
    pub jobs: usize,
    pub backend: Backend,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            symmetry_breaking: true,
            start: StartTuple::Ones,
            call_timeout: None,
            global_timeout: None,
            size_cap: None,
            jobs: 1,
            backend: Backend::Internal,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Sat,
    Unsat,
    Timeout,
}

/// One solved tuple, in the order the search solved it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Visit {
    pub sizes: SizeTuple,
    pub verdict: Verdict,
    pub wall: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrontierEntry {
    pub sizes: SizeTuple,
    pub witness: Decomposition,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Completion {
    Complete,
    /// A SAT call hit its budget on this tuple.
    CallTimeout(SizeTuple),
    GlobalTimeout,
}

/// Pareto-optimal size tuples with one witness each, sorted by tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frontier {
    pub n: usize,
    pub entries: Vec<FrontierEntry>,
    pub visits: Vec<Visit>,
    pub completion: Completion,
}

impl Frontier {
    pub fn is_complete(&self) -> bool {
        self.completion == Completion::Complete
    }

    pub fn tuples(&self) -> Vec<SizeTuple> {
        self.entries.iter().map(|e| e.sizes.clone()).collect()
    }

    pub fn get(&self, sizes: &[usize]) -> Option<&FrontierEntry> {
        self.entries.iter().find(|e| e.sizes.as_slice() == sizes)
    }

    /// Machine-readable report. Wall times are left out so identical
    /// inputs give byte-identical output.
    pub fn report(&self) -> FrontierReport {
        FrontierReport {
            version: crate::automata::FORMAT_VERSION.to_string(),
            n: self.n,
            complete: self.is_complete(),
            incomplete: !self.is_complete(),
            incomplete_reason: match &self.completion {
                Completion::Complete => None,
                Completion::CallTimeout(t) => Some(format!("SAT call timed out on {t}")),
                Completion::GlobalTimeout => Some("global time budget exhausted".to_string()),
            },
            frontier: self
                .entries
                .iter()
                .map(|e| ReportEntry {
                    sizes: e.sizes.as_slice().to_vec(),
                    witness: DecompositionDoc::from_decomposition(&e.witness),
                })
                .collect(),
            explored: self
                .visits
                .iter()
                .map(|v| ExploredTuple {
                    sizes: v.sizes.as_slice().to_vec(),
                    verdict: v.verdict,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrontierReport {
    pub version: String,
    pub n: usize,
    pub complete: bool,
    pub incomplete: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub incomplete_reason: Option<String>,
    pub frontier: Vec<ReportEntry>,
    pub explored: Vec<ExploredTuple>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportEntry {
    pub sizes: Vec<usize>,
    pub witness: DecompositionDoc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExploredTuple {
    pub sizes: Vec<usize>,
    pub verdict: Verdict,
}

/// Outcome of a single size tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TupleOutcome {
    Sat(Decomposition),
    Unsat,
    Timeout,
}

/// Encodes and solves one size tuple.
pub fn solve_tuple(
    apta: &Apta,
    sizes: &SizeTuple,
    symmetry_breaking: bool,
    backend: &Backend,
    budget: Option<Duration>,
) -> Result<TupleOutcome, SearchError> {
    let encoding = encode(apta, sizes, &EncodeOptions { symmetry_breaking });
    let result = backend.solve(&encoding.cnf, budget)?;
    Ok(match result.status {
        SolveStatus::Sat(model) => TupleOutcome::Sat(encoding.decode(&model)?),
        SolveStatus::Unsat => TupleOutcome::Unsat,
        SolveStatus::Timeout => TupleOutcome::Timeout,
    })
}

pub fn search_frontier(sample: &LabeledSample, n: usize, opts: &SearchOptions) -> Result<Frontier, SearchError> {
    if n == 0 {
        return Err(SearchError::NoDfas);
    }
    let started = Instant::now();
    let apta = Apta::build(sample);
    let cap = opts.size_cap.unwrap_or(apta.len() + 1);
    let pool = if opts.jobs > 1 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(opts.jobs)
                .build()
                .expect("thread pool"),
        )
    } else {
        None
    };

    let mut frontier: Vec<FrontierEntry> = Vec::new();
    let mut visits = Vec::new();
    let mut layer: BTreeSet<SizeTuple> = BTreeSet::from([opts.start.tuple(n)]);
    let mut completion = Completion::Complete;

    'layers: while !layer.is_empty() {
        let pending: Vec<SizeTuple> = layer
            .into_iter()
            .filter(|t| !frontier.iter().any(|e| e.sizes.dominates(t).unwrap_or(false)))
            .collect();
        if let Some(t) = pending.iter().find(|t| t.largest() > cap) {
            return Err(SearchError::SizeCapExceeded {
                tuple: t.as_slice().to_vec(),
                cap,
            });
        }

        let budget = |now: Instant| -> Option<Option<Duration>> {
            let remaining = match opts.global_timeout {
                Some(global) => Some(global.checked_sub(now.duration_since(started))?),
                None => None,
            };
            Some(match (remaining, opts.call_timeout) {
                (Some(r), Some(c)) => Some(r.min(c)),
                (r, c) => r.or(c),
            })
        };
        let run = |t: &SizeTuple| -> Option<Result<(TupleOutcome, Duration), SearchError>> {
            let call_start = Instant::now();
            let budget = budget(call_start)?;
            Some(
                solve_tuple(&apta, t, opts.symmetry_breaking, &opts.backend, budget).map(|o| (o, call_start.elapsed())),
            )
        };

        let results: Vec<Option<Result<(TupleOutcome, Duration), SearchError>>> = match &pool {
            Some(pool) => pool.install(|| pending.par_iter().map(run).collect()),
            None => {
                let mut out = Vec::with_capacity(pending.len());
                for t in &pending {
                    let r = run(t);
                    let stop = matches!(r, None | Some(Err(_)) | Some(Ok((TupleOutcome::Timeout, _))));
                    out.push(r);
                    if stop {
                        break;
                    }
                }
                out
            }
        };

        let mut next = BTreeSet::new();
        for (t, result) in pending.iter().zip(results) {
            let Some(result) = result else {
                completion = Completion::GlobalTimeout;
                break 'layers;
            };
            let (outcome, wall) = result?;
            match outcome {
                TupleOutcome::Sat(witness) => {
                    debug_assert_eq!(sample.is_consistent(&witness).ok(), Some(true));
                    visits.push(Visit {
                        sizes: t.clone(),
                        verdict: Verdict::Sat,
                        wall,
                    });
                    frontier.push(FrontierEntry {
                        sizes: t.clone(),
                        witness,
                    });
                }
                TupleOutcome::Unsat => {
                    visits.push(Visit {
                        sizes: t.clone(),
                        verdict: Verdict::Unsat,
                        wall,
                    });
                    next.extend(t.successors());
                }
                TupleOutcome::Timeout => {
                    visits.push(Visit {
                        sizes: t.clone(),
                        verdict: Verdict::Timeout,
                        wall,
                    });
                    completion = if opts.global_timeout.is_some_and(|g| started.elapsed() >= g) {
                        Completion::GlobalTimeout
                    } else {
                        Completion::CallTimeout(t.clone())
                    };
                    break 'layers;
                }
            }
        }
        layer = next;
    }

    frontier.sort_by(|a, b| a.sizes.cmp(&b.sizes));
    Ok(Frontier {
        n,
        entries: frontier,
        visits,
        completion,
    })
}
