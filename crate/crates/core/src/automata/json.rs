//! Versioned JSON documents for DFAs and decompositions.
//!
//! ```json
//! {
//!   "version": "v1",
//!   "alphabet": ["a", "b"],
//!   "num_states": 2,
//!   "initial": 0,
//!   "accepting": [0],
//!   "delta": [[1, 0], [0, 1]]
//! }
//! ```
//!
//! `delta[state][symbol]` is the target state, with symbols in alphabet
//! order. A decomposition document carries the shared alphabet once and a
//! `dfas` array of bodies without the alphabet.

use serde::{Deserialize, Serialize};

use super::{Alphabet, Decomposition, Dfa};
use crate::error::AutomatonError;

pub const FORMAT_VERSION: &str = "v1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DfaBody {
    pub num_states: usize,
    pub initial: usize,
    pub accepting: Vec<usize>,
    pub delta: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DfaDoc {
    pub version: String,
    pub alphabet: Vec<String>,
    pub num_states: usize,
    pub initial: usize,
    pub accepting: Vec<usize>,
    pub delta: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecompositionDoc {
    pub version: String,
    pub alphabet: Vec<String>,
    pub dfas: Vec<DfaBody>,
}

impl DfaBody {
    pub fn from_dfa(dfa: &Dfa) -> Self {
        Self {
            num_states: dfa.num_states(),
            initial: dfa.initial(),
            accepting: dfa.accepting_states().collect(),
            delta: dfa.table(),
        }
    }

    pub fn to_dfa(&self, alphabet: &Alphabet) -> Result<Dfa, AutomatonError> {
        Dfa::new(
            alphabet.clone(),
            self.num_states,
            self.initial,
            self.accepting.iter().copied(),
            self.delta.clone(),
        )
    }
}

impl DecompositionDoc {
    pub fn from_decomposition(decomp: &Decomposition) -> Self {
        Self {
            version: FORMAT_VERSION.to_string(),
            alphabet: decomp.alphabet().labels().to_vec(),
            dfas: decomp.dfas().iter().map(DfaBody::from_dfa).collect(),
        }
    }

    pub fn to_decomposition(&self) -> Result<Decomposition, AutomatonError> {
        check_version(&self.version)?;
        let alphabet = Alphabet::new(self.alphabet.iter().cloned())?;
        let dfas = self
            .dfas
            .iter()
            .enumerate()
            .map(|(k, body)| {
                body.to_dfa(&alphabet).map_err(|e| AutomatonError::Member {
                    index: k,
                    source: Box::new(e),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Decomposition::new(dfas)
    }
}

fn check_version(version: &str) -> Result<(), AutomatonError> {
    if version == FORMAT_VERSION {
        Ok(())
    } else {
        Err(AutomatonError::UnsupportedVersion(version.to_string()))
    }
}

pub fn dfa_to_json(dfa: &Dfa) -> String {
    let body = DfaBody::from_dfa(dfa);
    let doc = DfaDoc {
        version: FORMAT_VERSION.to_string(),
        alphabet: dfa.alphabet().labels().to_vec(),
        num_states: body.num_states,
        initial: body.initial,
        accepting: body.accepting,
        delta: body.delta,
    };
    serde_json::to_string_pretty(&doc).expect("DFA documents always serialize")
}

pub fn dfa_from_json(text: &str) -> Result<Dfa, AutomatonError> {
    let doc: DfaDoc = serde_json::from_str(text)?;
    check_version(&doc.version)?;
    let alphabet = Alphabet::new(doc.alphabet)?;
    Dfa::new(alphabet, doc.num_states, doc.initial, doc.accepting, doc.delta)
}

pub fn decomposition_to_json(decomp: &Decomposition) -> String {
    serde_json::to_string_pretty(&DecompositionDoc::from_decomposition(decomp))
        .expect("decomposition documents always serialize")
}

pub fn decomposition_from_json(text: &str) -> Result<Decomposition, AutomatonError> {
    let doc: DecompositionDoc = serde_json::from_str(text)?;
    doc.to_decomposition()
}
