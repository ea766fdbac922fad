//! Identification of DFA decompositions from labeled examples.
//!
//! A decomposition is a tuple of DFAs whose language is the intersection of
//! the members' languages. Given positive and negative example words, this
//! crate finds decompositions consistent with them by encoding the search
//! as propositional satisfiability, and enumerates the Pareto-optimal size
//! tuples `(m_1, ..., m_n)` for which such decompositions exist.
//!
//! ```
//! use dfa_decomp::{search_frontier, LabeledSample, SearchOptions};
//!
//! let sample = LabeledSample::from_labels(
//!     Some(&["a", "b"][..]),
//!     &[vec!["a", "b"], vec!["a", "a", "b"]],
//!     &[vec!["b"], vec!["b", "a"]],
//! )?;
//! let frontier = search_frontier(&sample, 1, &SearchOptions::default())?;
//! let best = &frontier.entries[0];
//! assert!(sample.is_consistent(&best.witness)?);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod automata;
pub mod cli;
pub mod encoding;
pub mod error;
pub mod pareto;
pub mod sample;
pub mod satgate;
pub mod sizing;
pub mod taskgen;

pub use automata::{minimize, product, Alphabet, Decomposition, Dfa, Symbol, Word};
pub use encoding::{encode, EncodeOptions, Encoding};
pub use pareto::{search_frontier, solve_tuple, Frontier, SearchOptions, SizeTuple, StartTuple, TupleOutcome};
pub use sample::{Apta, LabeledSample};
pub use satgate::Backend;
pub use sizing::{decomposition_dl, dfa_dl, DescriptionLength};
pub use taskgen::{generate_sample, BenchConfig, GenerateOptions, PartialOrderTask};
