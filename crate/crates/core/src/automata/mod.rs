//! Complete DFAs, DFA decompositions and their acceptance semantics.
//!
//! A [`Decomposition`] is an ordered tuple of DFAs over one shared
//! [`Alphabet`]; it accepts a word iff every member accepts it. All types
//! here are immutable after construction.

mod dot;
mod json;
mod ops;

pub use dot::{decomposition_to_dot, to_dot};
pub use json::{
    decomposition_from_json, decomposition_to_json, dfa_from_json, dfa_to_json, DecompositionDoc, DfaBody, DfaDoc,
    FORMAT_VERSION,
};
pub use ops::{equivalent, minimize, product};

use std::fmt;

use crate::error::AutomatonError;

/// Index of a symbol inside an [`Alphabet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(pub u32);

impl Symbol {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A finite word as a sequence of symbol indices.
pub type Word = Vec<Symbol>;

/// Ordered, non-empty list of unique symbol labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    labels: Vec<String>,
}

impl Alphabet {
    pub fn new<I, S>(labels: I) -> Result<Self, AutomatonError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(AutomatonError::EmptyAlphabet);
        }
        for (i, label) in labels.iter().enumerate() {
            if label.is_empty() || label.chars().any(char::is_whitespace) {
                return Err(AutomatonError::InvalidLabel(label.clone()));
            }
            if labels[..i].contains(label) {
                return Err(AutomatonError::DuplicateLabel(label.clone()));
            }
        }
        Ok(Self { labels })
    }

    /// Alphabet `0, 1, ..., size-1`, as used by Abbadingo-style files.
    pub fn numeric(size: usize) -> Result<Self, AutomatonError> {
        Self::new((0..size).map(|i| i.to_string()))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        (0..self.labels.len() as u32).map(Symbol)
    }

    pub fn label(&self, symbol: Symbol) -> &str {
        &self.labels[symbol.index()]
    }

    pub fn symbol(&self, label: &str) -> Result<Symbol, AutomatonError> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| Symbol(i as u32))
            .ok_or_else(|| AutomatonError::UnknownSymbol(label.to_string()))
    }

    pub fn contains(&self, symbol: Symbol) -> bool {
        symbol.index() < self.labels.len()
    }

    pub fn parse_word<S: AsRef<str>>(&self, labels: &[S]) -> Result<Word, AutomatonError> {
        labels.iter().map(|l| self.symbol(l.as_ref())).collect()
    }

    /// Parses a whitespace-separated word such as `"y r b n"`.
    pub fn parse_text(&self, text: &str) -> Result<Word, AutomatonError> {
        text.split_whitespace().map(|l| self.symbol(l)).collect()
    }

    pub fn render(&self, word: &[Symbol]) -> String {
        if word.is_empty() {
            return "ε".to_string();
        }
        word.iter().map(|&s| self.label(s)).collect::<Vec<_>>().join(" ")
    }

    fn check_word(&self, word: &[Symbol]) -> Result<(), AutomatonError> {
        match word.iter().find(|s| !self.contains(**s)) {
            Some(s) => Err(AutomatonError::SymbolOutOfRange {
                symbol: s.0,
                size: self.len(),
            }),
            None => Ok(()),
        }
    }
}

/// A complete deterministic finite automaton.
///
/// States are `0..num_states`; `delta` is total.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dfa {
    alphabet: Alphabet,
    initial: usize,
    accepting: Vec<bool>,
    // row-major: delta[state * |Σ| + symbol]
    delta: Vec<usize>,
}

impl Dfa {
    /// Builds a DFA from a transition table indexed `[state][symbol]`.
    pub fn new(
        alphabet: Alphabet,
        num_states: usize,
        initial: usize,
        accepting: impl IntoIterator<Item = usize>,
        table: Vec<Vec<usize>>,
    ) -> Result<Self, AutomatonError> {
        if num_states == 0 {
            return Err(AutomatonError::NoStates);
        }
        if initial >= num_states {
            return Err(AutomatonError::StateOutOfRange {
                state: initial,
                num_states,
            });
        }
        let mut flags = vec![false; num_states];
        for state in accepting {
            if state >= num_states {
                return Err(AutomatonError::StateOutOfRange { state, num_states });
            }
            flags[state] = true;
        }
        if table.len() != num_states {
            return Err(AutomatonError::TableShape {
                expected: num_states,
                found: table.len(),
            });
        }
        let width = alphabet.len();
        let mut delta = Vec::with_capacity(num_states * width);
        for (state, row) in table.into_iter().enumerate() {
            if row.len() < width {
                return Err(AutomatonError::MissingTransition {
                    state,
                    symbol: alphabet.labels()[row.len()].clone(),
                });
            }
            if row.len() > width {
                return Err(AutomatonError::ExtraTransitions {
                    state,
                    found: row.len(),
                    alphabet: width,
                });
            }
            for &target in &row {
                if target >= num_states {
                    return Err(AutomatonError::StateOutOfRange {
                        state: target,
                        num_states,
                    });
                }
            }
            delta.extend(row);
        }
        Ok(Self {
            alphabet,
            initial,
            accepting: flags,
            delta,
        })
    }

    /// Builds a DFA from a transition function, used by generators and tests.
    pub fn from_fn(
        alphabet: Alphabet,
        num_states: usize,
        initial: usize,
        accepting: impl IntoIterator<Item = usize>,
        step: impl Fn(usize, Symbol) -> usize,
    ) -> Result<Self, AutomatonError> {
        let table = (0..num_states)
            .map(|q| alphabet.symbols().map(|s| step(q, s)).collect())
            .collect();
        Self::new(alphabet, num_states, initial, accepting, table)
    }

    /// The one-state DFA accepting every word.
    pub fn universal(alphabet: Alphabet) -> Self {
        let width = alphabet.len();
        Self {
            alphabet,
            initial: 0,
            accepting: vec![true],
            delta: vec![0; width],
        }
    }

    pub(crate) fn from_parts(alphabet: Alphabet, initial: usize, accepting: Vec<bool>, delta: Vec<usize>) -> Self {
        debug_assert_eq!(delta.len(), accepting.len() * alphabet.len());
        debug_assert!(initial < accepting.len());
        Self {
            alphabet,
            initial,
            accepting,
            delta,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn is_accepting(&self, state: usize) -> bool {
        self.accepting[state]
    }

    pub fn accepting_states(&self) -> impl Iterator<Item = usize> + '_ {
        self.accepting
            .iter()
            .enumerate()
            .filter_map(|(q, &acc)| acc.then_some(q))
    }

    pub fn num_accepting(&self) -> usize {
        self.accepting.iter().filter(|&&a| a).count()
    }

    pub fn next(&self, state: usize, symbol: Symbol) -> usize {
        self.delta[state * self.alphabet.len() + symbol.index()]
    }

    /// Transition table indexed `[state][symbol]`.
    pub fn table(&self) -> Vec<Vec<usize>> {
        self.delta.chunks(self.alphabet.len()).map(<[usize]>::to_vec).collect()
    }

    /// Number of transitions that leave their source state.
    pub fn non_stuttering_transitions(&self) -> usize {
        (0..self.num_states())
            .flat_map(|q| self.alphabet.symbols().map(move |s| (q, s)))
            .filter(|&(q, s)| self.next(q, s) != q)
            .count()
    }

    pub fn run(&self, word: &[Symbol]) -> Result<usize, AutomatonError> {
        self.alphabet.check_word(word)?;
        Ok(self.run_unchecked(word))
    }

    pub(crate) fn run_unchecked(&self, word: &[Symbol]) -> usize {
        word.iter().fold(self.initial, |q, &s| self.next(q, s))
    }

    pub fn accepts(&self, word: &[Symbol]) -> Result<bool, AutomatonError> {
        Ok(self.accepting[self.run(word)?])
    }

    /// Renumbers reachable states in breadth-first order from the initial
    /// state (symbols in alphabet order) and drops unreachable ones.
    pub fn canonical(&self) -> Dfa {
        let width = self.alphabet.len();
        let mut order = vec![usize::MAX; self.num_states()];
        let mut queue = vec![self.initial];
        order[self.initial] = 0;
        let mut head = 0;
        while head < queue.len() {
            let q = queue[head];
            head += 1;
            for s in self.alphabet.symbols() {
                let t = self.next(q, s);
                if order[t] == usize::MAX {
                    order[t] = queue.len();
                    queue.push(t);
                }
            }
        }
        let mut delta = Vec::with_capacity(queue.len() * width);
        for &q in &queue {
            delta.extend(self.alphabet.symbols().map(|s| order[self.next(q, s)]));
        }
        let accepting = queue.iter().map(|&q| self.accepting[q]).collect();
        Dfa::from_parts(self.alphabet.clone(), 0, accepting, delta)
    }
}

/// An ordered, non-empty tuple of DFAs over one alphabet whose state counts
/// are non-decreasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Decomposition {
    dfas: Vec<Dfa>,
}

impl Decomposition {
    pub fn new(dfas: Vec<Dfa>) -> Result<Self, AutomatonError> {
        let first = dfas.first().ok_or(AutomatonError::EmptyDecomposition)?;
        if let Some(k) = dfas.iter().position(|d| d.alphabet != first.alphabet) {
            return Err(AutomatonError::AlphabetMismatch(format!(
                "member {k} does not share the alphabet of member 0"
            )));
        }
        if let Some(k) = dfas.windows(2).position(|w| w[0].num_states() > w[1].num_states()) {
            return Err(AutomatonError::UnorderedSizes {
                index: k + 1,
                sizes: dfas.iter().map(Dfa::num_states).collect(),
            });
        }
        Ok(Self { dfas })
    }

    /// Like [`Decomposition::new`] but sorts members by state count first
    /// (stable, so equal-size members keep their relative order).
    pub fn sorted(mut dfas: Vec<Dfa>) -> Result<Self, AutomatonError> {
        dfas.sort_by_key(Dfa::num_states);
        Self::new(dfas)
    }

    pub fn dfas(&self) -> &[Dfa] {
        &self.dfas
    }

    pub fn len(&self) -> usize {
        self.dfas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dfas.is_empty()
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.dfas[0].alphabet
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.dfas.iter().map(Dfa::num_states).collect()
    }

    pub fn accepts(&self, word: &[Symbol]) -> Result<bool, AutomatonError> {
        self.alphabet().check_word(word)?;
        Ok(self.accepts_unchecked(word))
    }

    pub(crate) fn accepts_unchecked(&self, word: &[Symbol]) -> bool {
        self.dfas.iter().all(|d| d.accepting[d.run_unchecked(word)])
    }

    /// How many members accept `word`.
    pub fn acceptance_count(&self, word: &[Symbol]) -> Result<usize, AutomatonError> {
        self.alphabet().check_word(word)?;
        Ok(self.dfas.iter().filter(|d| d.accepting[d.run_unchecked(word)]).count())
    }
}

impl From<Dfa> for Decomposition {
    fn from(dfa: Dfa) -> Self {
        Self { dfas: vec![dfa] }
    }
}

impl fmt::Display for Dfa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "     ")?;
        for label in self.alphabet.labels() {
            write!(f, " {label:>4}")?;
        }
        writeln!(f)?;
        for q in 0..self.num_states() {
            let start = if q == self.initial { "->" } else { "  " };
            let acc = if self.accepting[q] { '*' } else { ' ' };
            write!(f, "{start}{acc}{q:>2}")?;
            for s in self.alphabet.symbols() {
                write!(f, " {:>4}", self.next(q, s))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
