use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum AutomatonError {
    #[error("alphabet must contain at least one symbol")]
    EmptyAlphabet,
    #[error("duplicate symbol label '{0}'")]
    DuplicateLabel(String),
    #[error("invalid symbol label '{0}' (labels must be non-empty and contain no whitespace)")]
    InvalidLabel(String),
    #[error("unknown symbol {0}")]
    UnknownSymbol(String),
    #[error("symbol index {symbol} is outside an alphabet of size {size}")]
    SymbolOutOfRange { symbol: u32, size: usize },
    #[error("a DFA needs at least one state")]
    NoStates,
    #[error("state {state} is out of range for a DFA with {num_states} states")]
    StateOutOfRange { state: usize, num_states: usize },
    #[error("transition table has {found} rows, expected {expected}")]
    TableShape { expected: usize, found: usize },
    #[error("state {state} has no transition on symbol '{symbol}'")]
    MissingTransition { state: usize, symbol: String },
    #[error("state {state} lists {found} transitions for an alphabet of {alphabet} symbols")]
    ExtraTransitions {
        state: usize,
        found: usize,
        alphabet: usize,
    },
    #[error("a decomposition needs at least one DFA")]
    EmptyDecomposition,
    #[error("decomposition sizes must be non-decreasing, member {index} breaks {sizes:?}")]
    UnorderedSizes { index: usize, sizes: Vec<usize> },
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("member {index}: {source}")]
    Member {
        index: usize,
        #[source]
        source: Box<AutomatonError>,
    },
    #[error("unsupported document version '{0}' (expected 'v1')")]
    UnsupportedVersion(String),
    #[error("JSON error at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
}

impl From<serde_json::Error> for AutomatonError {
    fn from(e: serde_json::Error) -> Self {
        AutomatonError::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Error)]
pub enum SampleError {
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error("contradictory sample: {0} is labeled both positive and negative")]
    Contradiction(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Debug, Error)]
pub enum EncodeError {
    #[error("size tuple must be non-empty")]
    EmptySizes,
    #[error("every DFA needs at least one state, got sizes {0:?}")]
    ZeroSize(Vec<usize>),
    #[error("size tuple {0:?} is not non-decreasing")]
    Unordered(Vec<usize>),
    #[error("size tuples have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("model has {found} variables, encoding allocated {expected}")]
    ModelSize { expected: usize, found: usize },
    #[error("internal error: {0}")]
    Internal(String),
}

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("solver binary {path:?} could not be started: {source}")]
    Spawn {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("I/O error talking to the solver: {0}")]
    Io(#[from] std::io::Error),
    #[error("solver produced malformed output: {0}")]
    MalformedOutput(String),
    #[error("solver exited abnormally ({0})")]
    Crashed(String),
    #[error("invalid backend specification '{0}' (expected 'internal' or 'dimacs:<path>')")]
    BadSpec(String),
    #[error("no solver path given and DFA_DECOMP_SOLVER is not set")]
    NoSolverPath,
}

#[derive(Debug, Error)]
pub enum SearchError {
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("search needs at least one DFA")]
    NoDfas,
    #[error("size tuple {tuple:?} exceeds the per-DFA size cap of {cap}")]
    SizeCapExceeded { tuple: Vec<usize>, cap: usize },
}

#[derive(Debug, Error)]
pub enum GenerateError {
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error("task needs at least one ordering pair")]
    NoPairs,
    #[error("ordering pair uses '{0}' on both sides")]
    DegeneratePair(String),
    #[error("example count must be even and at least 2, got {0}")]
    BadCount(usize),
    #[error("only {available} distinct {class} words up to length {max_len}, {needed} requested")]
    NotEnoughWords {
        class: &'static str,
        available: u128,
        needed: usize,
        max_len: usize,
    },
    #[error(transparent)]
    Sample(#[from] SampleError),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error("invalid benchmark configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
