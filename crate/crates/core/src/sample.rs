//! Labeled examples and the augmented prefix tree acceptor built from them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::automata::{Alphabet, Decomposition, Symbol, Word};
use crate::error::{AutomatonError, SampleError};

/// Positive and negative example words over a fixed alphabet.
///
/// Duplicates collapse; a word may not be both positive and negative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledSample {
    alphabet: Alphabet,
    positives: BTreeSet<Word>,
    negatives: BTreeSet<Word>,
}

impl LabeledSample {
    pub fn new(
        alphabet: Alphabet,
        positives: impl IntoIterator<Item = Word>,
        negatives: impl IntoIterator<Item = Word>,
    ) -> Result<Self, SampleError> {
        let positives: BTreeSet<Word> = positives.into_iter().collect();
        let negatives: BTreeSet<Word> = negatives.into_iter().collect();
        for word in positives.iter().chain(&negatives) {
            if let Some(s) = word.iter().find(|s| !alphabet.contains(**s)) {
                return Err(AutomatonError::SymbolOutOfRange {
                    symbol: s.0,
                    size: alphabet.len(),
                }
                .into());
            }
        }
        if let Some(word) = positives.intersection(&negatives).next() {
            return Err(SampleError::Contradiction(format!("\"{}\"", alphabet.render(word))));
        }
        Ok(Self {
            alphabet,
            positives,
            negatives,
        })
    }

    /// Builds a sample from label sequences. With `alphabet = None` the
    /// alphabet is inferred as the sorted set of labels that occur.
    pub fn from_labels<S: AsRef<str>>(
        alphabet: Option<&[&str]>,
        positives: &[Vec<S>],
        negatives: &[Vec<S>],
    ) -> Result<Self, SampleError> {
        let alphabet = match alphabet {
            Some(labels) => Alphabet::new(labels.iter().copied())?,
            None => {
                let seen: BTreeSet<&str> = positives.iter().chain(negatives).flatten().map(AsRef::as_ref).collect();
                Alphabet::new(seen)?
            }
        };
        let parse = |words: &[Vec<S>]| -> Result<Vec<Word>, AutomatonError> {
            words.iter().map(|w| alphabet.parse_word(w)).collect()
        };
        let pos = parse(positives)?;
        let neg = parse(negatives)?;
        Self::new(alphabet, pos, neg)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn positives(&self) -> &BTreeSet<Word> {
        &self.positives
    }

    pub fn negatives(&self) -> &BTreeSet<Word> {
        &self.negatives
    }

    pub fn len(&self) -> usize {
        self.positives.len() + self.negatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Every positive accepted by all members, every negative rejected by at
    /// least one.
    pub fn is_consistent(&self, decomp: &Decomposition) -> Result<bool, AutomatonError> {
        if decomp.alphabet() != &self.alphabet {
            return Err(AutomatonError::AlphabetMismatch(
                "decomposition and sample use different alphabets".into(),
            ));
        }
        Ok(self.positives.iter().all(|w| decomp.accepts_unchecked(w))
            && self.negatives.iter().all(|w| !decomp.accepts_unchecked(w)))
    }

    pub fn to_json(&self) -> String {
        let render = |words: &BTreeSet<Word>| -> Vec<Vec<String>> {
            words
                .iter()
                .map(|w| w.iter().map(|&s| self.alphabet.label(s).to_string()).collect())
                .collect()
        };
        let doc = SampleDoc {
            version: Some(crate::automata::FORMAT_VERSION.to_string()),
            alphabet: Some(self.alphabet.labels().to_vec()),
            positives: render(&self.positives),
            negatives: render(&self.negatives),
        };
        serde_json::to_string_pretty(&doc).expect("sample documents always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, SampleError> {
        let doc: SampleDoc = serde_json::from_str(text).map_err(AutomatonError::from)?;
        if let Some(v) = &doc.version {
            if v != crate::automata::FORMAT_VERSION {
                return Err(AutomatonError::UnsupportedVersion(v.clone()).into());
            }
        }
        let alphabet: Option<Vec<&str>> = doc.alphabet.as_ref().map(|a| a.iter().map(String::as_str).collect());
        Self::from_labels(alphabet.as_deref(), &doc.positives, &doc.negatives)
    }

    /// Reads the Abbadingo plain-text format: a header `count alphabet_size`
    /// followed by one `label length sym sym ...` line per example, where
    /// label 1 is positive, 0 negative and -1 unlabeled (skipped).
    pub fn from_abbadingo(text: &str) -> Result<Self, SampleError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (header_line, header) = lines.next().ok_or(SampleError::Parse {
            line: 1,
            message: "missing header".into(),
        })?;
        let header: Vec<usize> = parse_fields(header_line, header)?;
        let [count, size] = header[..] else {
            return Err(SampleError::Parse {
                line: header_line,
                message: "header must be 'count alphabet_size'".into(),
            });
        };
        let alphabet = Alphabet::numeric(size)?;
        let mut positives = Vec::new();
        let mut negatives = Vec::new();
        let mut seen = 0;
        for (line, body) in lines {
            seen += 1;
            let fields: Vec<i64> = parse_fields(line, body)?;
            let (label, length, symbols) = match fields[..] {
                [label, length, ref rest @ ..] => (label, length, rest),
                _ => {
                    return Err(SampleError::Parse {
                        line,
                        message: "expected 'label length symbols...'".into(),
                    })
                }
            };
            if length < 0 || symbols.len() != length as usize {
                return Err(SampleError::Parse {
                    line,
                    message: format!("declared length {length} but found {} symbols", symbols.len()),
                });
            }
            let word = symbols
                .iter()
                .map(|&s| {
                    if s >= 0 && (s as usize) < size {
                        Ok(Symbol(s as u32))
                    } else {
                        Err(SampleError::Parse {
                            line,
                            message: format!("symbol {s} outside alphabet of size {size}"),
                        })
                    }
                })
                .collect::<Result<Word, _>>()?;
            match label {
                1 => positives.push(word),
                0 => negatives.push(word),
                -1 => {}
                other => {
                    return Err(SampleError::Parse {
                        line,
                        message: format!("label must be 1, 0 or -1, got {other}"),
                    })
                }
            }
        }
        if seen != count {
            return Err(SampleError::Parse {
                line: header_line,
                message: format!("header announces {count} examples, file has {seen}"),
            });
        }
        Self::new(alphabet, positives, negatives)
    }

    /// Writes the Abbadingo format; symbols are written as alphabet indices.
    pub fn to_abbadingo(&self) -> String {
        let mut out = format!("{} {}\n", self.len(), self.alphabet.len());
        for (label, words) in [(1, &self.positives), (0, &self.negatives)] {
            for word in words {
                write!(out, "{label} {}", word.len()).unwrap();
                for s in word {
                    write!(out, " {}", s.0).unwrap();
                }
                out.push('\n');
            }
        }
        out
    }
}

fn parse_fields<T: std::str::FromStr>(line: usize, text: &str) -> Result<Vec<T>, SampleError> {
    text.split_whitespace()
        .map(|f| {
            f.parse().map_err(|_| SampleError::Parse {
                line,
                message: format!("'{f}' is not an integer"),
            })
        })
        .collect()
}

/// On-disk JSON form of a sample. `alphabet` and `version` are optional.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub version: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alphabet: Option<Vec<String>>,
    #[serde(default)]
    pub positives: Vec<Vec<String>>,
    #[serde(default)]
    pub negatives: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeLabel {
    Unlabeled,
    Accepting,
    Rejecting,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AptaNode {
    pub parent: Option<usize>,
    pub symbol: Option<Symbol>,
    pub label: NodeLabel,
    pub children: BTreeMap<Symbol, usize>,
}

/// Augmented prefix tree acceptor: one node per distinct example prefix.
///
/// Nodes are numbered breadth-first with children in symbol order, so the
/// root is node 0 and every parent precedes its children.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Apta {
    alphabet: Alphabet,
    nodes: Vec<AptaNode>,
}

impl Apta {
    pub fn build(sample: &LabeledSample) -> Self {
        // First a trie in insertion order, then a breadth-first renumbering.
        let mut trie: Vec<(BTreeMap<Symbol, usize>, NodeLabel)> = vec![(BTreeMap::new(), NodeLabel::Unlabeled)];
        let labeled = sample
            .positives
            .iter()
            .map(|w| (w, NodeLabel::Accepting))
            .chain(sample.negatives.iter().map(|w| (w, NodeLabel::Rejecting)));
        for (word, label) in labeled {
            let mut node = 0;
            for &s in word {
                node = match trie[node].0.get(&s) {
                    Some(&child) => child,
                    None => {
                        let child = trie.len();
                        trie.push((BTreeMap::new(), NodeLabel::Unlabeled));
                        trie[node].0.insert(s, child);
                        child
                    }
                };
            }
            trie[node].1 = label;
        }

        let mut nodes = vec![AptaNode {
            parent: None,
            symbol: None,
            label: trie[0].1,
            children: BTreeMap::new(),
        }];
        let mut queue = vec![0usize];
        let mut head = 0;
        while head < queue.len() {
            let old = queue[head];
            let new_parent = head;
            head += 1;
            for (&s, &old_child) in &trie[old].0 {
                let id = nodes.len();
                nodes.push(AptaNode {
                    parent: Some(new_parent),
                    symbol: Some(s),
                    label: trie[old_child].1,
                    children: BTreeMap::new(),
                });
                nodes[new_parent].children.insert(s, id);
                queue.push(old_child);
            }
        }
        Self {
            alphabet: sample.alphabet.clone(),
            nodes,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root(&self) -> usize {
        0
    }

    pub fn nodes(&self) -> &[AptaNode] {
        &self.nodes
    }

    pub fn node(&self, v: usize) -> &AptaNode {
        &self.nodes[v]
    }

    pub fn accepting(&self) -> impl Iterator<Item = usize> + '_ {
        self.with_label(NodeLabel::Accepting)
    }

    pub fn rejecting(&self) -> impl Iterator<Item = usize> + '_ {
        self.with_label(NodeLabel::Rejecting)
    }

    fn with_label(&self, label: NodeLabel) -> impl Iterator<Item = usize> + '_ {
        self.nodes
            .iter()
            .enumerate()
            .filter_map(move |(v, n)| (n.label == label).then_some(v))
    }

    /// Node reached by `word`, if the word is a prefix of some example.
    pub fn walk(&self, word: &[Symbol]) -> Option<usize> {
        word.iter().try_fold(0, |v, s| self.nodes[v].children.get(s).copied())
    }

    /// The prefix spelled by the path from the root to `v`.
    pub fn prefix(&self, mut v: usize) -> Word {
        let mut word = Vec::new();
        while let (Some(p), Some(s)) = (self.nodes[v].parent, self.nodes[v].symbol) {
            word.push(s);
            v = p;
        }
        word.reverse();
        word
    }
}
