//! Brute-force oracles and random instance generators shared by the
//! integration tests. Nothing here touches the SAT encoding.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};

use dfa_decomp::{Alphabet, Decomposition, Dfa, LabeledSample, SizeTuple, Symbol, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn ab() -> Alphabet {
    Alphabet::new(["a", "b"]).unwrap()
}

/// Every complete DFA with `m` states over `alphabet`, initial state 0.
pub fn all_dfas(alphabet: &Alphabet, m: usize) -> Vec<Dfa> {
    let k = alphabet.len();
    let cells = m * k;
    let tables = m.pow(cells as u32);
    let mut out = Vec::with_capacity(tables << m);
    for code in 0..tables {
        let mut c = code;
        let table: Vec<Vec<usize>> = (0..m)
            .map(|_| {
                (0..k)
                    .map(|_| {
                        let t = c % m;
                        c /= m;
                        t
                    })
                    .collect()
            })
            .collect();
        for acc in 0..(1usize << m) {
            let accepting = (0..m).filter(|q| acc >> q & 1 == 1);
            out.push(Dfa::new(alphabet.clone(), m, 0, accepting, table.clone()).unwrap());
        }
    }
    out
}

/// Prefix trie of a sample, nodes in breadth-first order.
struct Trie {
    parent: Vec<usize>,
    symbol: Vec<usize>,
    label: Vec<Option<bool>>,
}

impl Trie {
    fn build(positives: &BTreeSet<Word>, negatives: &BTreeSet<Word>) -> Self {
        let mut children: Vec<BTreeMap<usize, usize>> = vec![BTreeMap::new()];
        let mut parent = vec![usize::MAX];
        let mut symbol = vec![usize::MAX];
        let mut label = vec![None];
        for (words, value) in [(positives, true), (negatives, false)] {
            for w in words {
                let mut v = 0;
                for s in w {
                    let next = children.len();
                    v = *children[v].entry(s.index()).or_insert_with(|| {
                        parent.push(v);
                        symbol.push(s.index());
                        label.push(None);
                        next
                    });
                    if v == next {
                        children.push(BTreeMap::new());
                    }
                }
                label[v] = Some(value);
            }
        }
        // renumber breadth-first so parents precede children
        let mut order = vec![0usize];
        let mut i = 0;
        while i < order.len() {
            order.extend(children[order[i]].values().copied());
            i += 1;
        }
        let mut new_id = vec![0; order.len()];
        for (new, &old) in order.iter().enumerate() {
            new_id[old] = new;
        }
        Trie {
            parent: order
                .iter()
                .map(|&o| if o == 0 { usize::MAX } else { new_id[parent[o]] })
                .collect(),
            symbol: order.iter().map(|&o| symbol[o]).collect(),
            label: order.iter().map(|&o| label[o]).collect(),
        }
    }
}

/// Backtracking search for a DFA with at most `m` states that accepts every
/// word in `positives` and rejects every word in `negatives`. States are
/// introduced in order of first use, which loses no generality.
pub fn find_consistent_dfa(
    alphabet: &Alphabet,
    positives: &BTreeSet<Word>,
    negatives: &BTreeSet<Word>,
    m: usize,
) -> Option<Dfa> {
    let k = alphabet.len();
    let trie = Trie::build(positives, negatives);
    let mut delta: Vec<Option<usize>> = vec![None; m * k];
    let mut accept: Vec<Option<bool>> = vec![None; m];
    let mut state = vec![0usize; trie.parent.len()];
    if let Some(l) = trie.label[0] {
        accept[0] = Some(l);
    }

    #[allow(clippy::too_many_arguments)]
    fn go(
        i: usize,
        used: usize,
        m: usize,
        k: usize,
        trie: &Trie,
        delta: &mut Vec<Option<usize>>,
        accept: &mut Vec<Option<bool>>,
        state: &mut Vec<usize>,
    ) -> bool {
        if i == trie.parent.len() {
            return true;
        }
        let cell = state[trie.parent[i]] * k + trie.symbol[i];
        let candidates: Vec<usize> = match delta[cell] {
            Some(t) => vec![t],
            None => (0..(used + 1).min(m)).collect(),
        };
        let fresh = delta[cell].is_none();
        for t in candidates {
            let old_accept = accept[t];
            if let Some(l) = trie.label[i] {
                match accept[t] {
                    Some(a) if a != l => continue,
                    _ => accept[t] = Some(l),
                }
            }
            if fresh {
                delta[cell] = Some(t);
            }
            state[i] = t;
            let used_next = used.max(t + 1);
            if go(i + 1, used_next, m, k, trie, delta, accept, state) {
                return true;
            }
            accept[t] = old_accept;
            if fresh {
                delta[cell] = None;
            }
        }
        false
    }

    if !go(1, 1, m, k, &trie, &mut delta, &mut accept, &mut state) {
        return None;
    }
    let table = (0..m)
        .map(|q| (0..k).map(|s| delta[q * k + s].unwrap_or(0)).collect())
        .collect();
    let accepting = (0..m).filter(|&q| accept[q] == Some(true));
    Some(Dfa::new(alphabet.clone(), m, 0, accepting, table).unwrap())
}

/// Smallest number of states of a DFA consistent with the sample.
pub fn min_consistent_size(sample: &LabeledSample) -> usize {
    (1..)
        .find(|&m| find_consistent_dfa(sample.alphabet(), sample.positives(), sample.negatives(), m).is_some())
        .unwrap()
}

/// Exhaustive existence check for an `(m1, m2)` decomposition: enumerate
/// every first member that accepts all positives, then search a second
/// member rejecting what the first lets through.
pub struct PairOracle<'a> {
    sample: &'a LabeledSample,
    memo: HashMap<(BTreeSet<Word>, usize), bool>,
}

impl<'a> PairOracle<'a> {
    pub fn new(sample: &'a LabeledSample) -> Self {
        Self {
            sample,
            memo: HashMap::new(),
        }
    }

    pub fn exists(&mut self, m1: usize, m2: usize) -> bool {
        let sample = self.sample;
        for a in all_dfas(sample.alphabet(), m1) {
            if !sample.positives().iter().all(|w| a.accepts(w).unwrap()) {
                continue;
            }
            let leaked: BTreeSet<Word> = sample
                .negatives()
                .iter()
                .filter(|w| a.accepts(w).unwrap())
                .cloned()
                .collect();
            let key = (leaked, m2);
            let found = match self.memo.get(&key) {
                Some(&f) => f,
                None => {
                    let f = find_consistent_dfa(sample.alphabet(), sample.positives(), &key.0, m2).is_some();
                    self.memo.insert(key, f);
                    f
                }
            };
            if found {
                return true;
            }
        }
        false
    }

    /// Pareto frontier over pairs `m1 <= m2 <= cap` by exhaustive enumeration.
    pub fn frontier(&mut self, cap: usize) -> Vec<SizeTuple> {
        let mut sat = Vec::new();
        for m1 in 1..=cap {
            for m2 in m1..=cap {
                if self.exists(m1, m2) {
                    sat.push(SizeTuple::new(vec![m1, m2]).unwrap());
                }
            }
        }
        let mut front: Vec<SizeTuple> = sat
            .iter()
            .filter(|t| !sat.iter().any(|o| o.dominates(t).unwrap()))
            .cloned()
            .collect();
        front.sort();
        front
    }
}

pub fn random_dfa<R: Rng>(rng: &mut R, alphabet: &Alphabet, m: usize) -> Dfa {
    let table = (0..m)
        .map(|_| (0..alphabet.len()).map(|_| rng.random_range(0..m)).collect())
        .collect();
    let accepting: Vec<usize> = (0..m).filter(|_| rng.random_bool(0.5)).collect();
    Dfa::new(alphabet.clone(), m, 0, accepting, table).unwrap()
}

pub fn random_word<R: Rng>(rng: &mut R, alphabet: &Alphabet, max_len: usize) -> Word {
    let len = rng.random_range(0..=max_len);
    (0..len)
        .map(|_| Symbol(rng.random_range(0..alphabet.len() as u32)))
        .collect()
}

/// Up to `count` distinct random words labeled by `target`.
pub fn labeled_by<R: Rng>(rng: &mut R, target: &Decomposition, count: usize, max_len: usize) -> LabeledSample {
    let alphabet = target.alphabet().clone();
    let mut words = BTreeSet::new();
    for _ in 0..count {
        words.insert(random_word(rng, &alphabet, max_len));
    }
    let (pos, neg): (Vec<Word>, Vec<Word>) = words.into_iter().partition(|w| target.accepts(w).unwrap());
    LabeledSample::new(alphabet, pos, neg).unwrap()
}

/// Random sample over `{a, b}` labeled by a random target DFA of 1 to 4
/// states, words up to length 5, at most 12 examples.
pub fn random_monolithic_sample(seed: u64) -> LabeledSample {
    let mut r = rng(seed);
    let m = r.random_range(1..=4);
    let target = random_dfa(&mut r, &ab(), m);
    let count = r.random_range(4..=12);
    labeled_by(&mut r, &Decomposition::from(target), count, 5)
}

/// Random sample over `{a, b}` labeled by a random pair of small DFAs.
pub fn random_pair_sample(seed: u64) -> LabeledSample {
    let mut r = rng(seed);
    let m1 = r.random_range(1..=3);
    let m2 = r.random_range(1..=3);
    let a = random_dfa(&mut r, &ab(), m1);
    let b = random_dfa(&mut r, &ab(), m2);
    let target = Decomposition::sorted(vec![a, b]).unwrap();
    let count = r.random_range(4..=12);
    labeled_by(&mut r, &target, count, 5)
}

/// Samples for the pair-frontier comparison: labeled by a random pair and
/// with a monolithic solution of at most 3 states, so the whole frontier
/// lies inside `(3, 3)`.
pub fn capped_pair_samples(count: usize, base_seed: u64) -> Vec<LabeledSample> {
    let mut out = Vec::new();
    let mut seed = base_seed;
    while out.len() < count {
        let s = random_pair_sample(seed);
        seed += 1;
        if s.negatives().is_empty() || s.positives().is_empty() {
            continue;
        }
        if min_consistent_size(&s) <= 3 {
            out.push(s);
        }
    }
    out
}

/// Words of length at most `max_len`, shortest first.
pub fn all_words(alphabet: &Alphabet, max_len: usize) -> Vec<Word> {
    let mut out = vec![vec![]];
    let mut layer: Vec<Word> = vec![vec![]];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| {
                alphabet.symbols().map(move |s| {
                    let mut w = w.clone();
                    w.push(s);
                    w
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}
