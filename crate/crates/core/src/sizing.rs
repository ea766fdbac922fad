//! Description length of DFAs and decompositions.
//!
//! For a DFA with `m` states over `|Σ|` symbols, `|F|` accepting states and
//! `z` non-stuttering transitions:
//!
//! ```text
//! size(A) = 3 + 2 ln m + 2 ln|Σ| + (|F| + 1) ln m + z (ln|Σ| + 2 ln m)
//! ```
//!
//! A decomposition shares its header across members:
//!
//! ```text
//! size(A_1..A_n) = Σ size(A_i) - (n - 1)(2 ln|Σ| + 1) - 2 (n - 1) ln m_1
//! ```
//!
//! Values are kept in nats; [`DescriptionLength::bits`] converts.

use std::fmt;

use crate::automata::{Decomposition, Dfa};

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct DescriptionLength {
    nats: f64,
}

impl DescriptionLength {
    pub fn from_nats(nats: f64) -> Self {
        Self { nats }
    }

    pub fn nats(self) -> f64 {
        self.nats
    }

    pub fn bits(self) -> f64 {
        self.nats / std::f64::consts::LN_2
    }
}

impl fmt::Display for DescriptionLength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.6} nats ({:.6} bits)", self.nats, self.bits())
    }
}

/// Description length from the raw counts.
pub fn dl_from_counts(states: usize, alphabet: usize, accepting: usize, non_stuttering: usize) -> DescriptionLength {
    let ln_m = (states as f64).ln();
    let ln_s = (alphabet as f64).ln();
    let nats =
        3.0 + 2.0 * ln_m + 2.0 * ln_s + (accepting as f64 + 1.0) * ln_m + non_stuttering as f64 * (ln_s + 2.0 * ln_m);
    DescriptionLength::from_nats(nats)
}

pub fn dfa_dl(dfa: &Dfa) -> DescriptionLength {
    dl_from_counts(
        dfa.num_states(),
        dfa.alphabet().len(),
        dfa.num_accepting(),
        dfa.non_stuttering_transitions(),
    )
}

pub fn decomposition_dl(decomp: &Decomposition) -> DescriptionLength {
    let shared = (decomp.len() - 1) as f64;
    let ln_s = (decomp.alphabet().len() as f64).ln();
    let ln_m1 = (decomp.dfas()[0].num_states() as f64).ln();
    let members: f64 = decomp.dfas().iter().map(|d| dfa_dl(d).nats()).sum();
    DescriptionLength::from_nats(members - shared * (2.0 * ln_s + 1.0) - 2.0 * shared * ln_m1)
}
