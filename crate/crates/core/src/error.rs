use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SequenceError {
    #[error("empty sequence")]
    Empty,
    #[error("column {column}: illegal nucleotide {found:?}")]
    IllegalCharacter { column: usize, found: char },
    #[error("line {line}: {source}")]
    AtLine {
        line: usize,
        #[source]
        source: Box<SequenceError>,
    },
}

impl SequenceError {
    pub(crate) fn at_line(self, line: usize) -> Self {
        SequenceError::AtLine {
            line,
            source: Box::new(self),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("column {column}: illegal character {found:?} (expected '.', '(' or ')')")]
    IllegalCharacter { column: usize, found: char },
    #[error("column {column}: unmatched ')'")]
    UnmatchedClose { column: usize },
    #[error("column {column}: unmatched '('")]
    UnmatchedOpen { column: usize },
    #[error("arc ({i},{j}) encloses fewer than 3 positions (need j - i > 3)")]
    HairpinTooShort { i: usize, j: usize },
    #[error("arc ({i},{j}) lies outside 1..={n}")]
    OutOfRange { i: usize, j: usize, n: usize },
    #[error("arc ({i},{j}) is not ordered (need i < j)")]
    Unordered { i: usize, j: usize },
    #[error("position {position} is paired more than once")]
    PositionReused { position: usize },
    #[error("arcs ({i},{j}) and ({r},{s}) cross")]
    Crossing {
        i: usize,
        j: usize,
        r: usize,
        s: usize,
    },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("no structure found in input")]
    Missing,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamsError {
    #[error("parameter file: {0}")]
    Syntax(String),
    #[error("unsupported parameter format {found:?} (expected {expected:?})")]
    Format {
        found: String,
        expected: &'static str,
    },
    #[error("{key}: {message}")]
    Value { key: String, message: String },
    #[error("cannot read parameter file: {0}")]
    Io(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstraintError {
    #[error("interval [{start},{end}] is not within 1..={n}")]
    OutOfRange { start: usize, end: usize, n: usize },
    #[error("pattern length {found} does not match interval width {expected}")]
    WidthMismatch { expected: usize, found: usize },
    #[error("position {position} allows no nucleotide")]
    EmptyMask { position: usize },
    #[error("constraint covers {found} positions, structure has {expected}")]
    LengthMismatch { expected: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("frequencies sum to {0}, expected 1")]
    NotNormalized(f64),
    #[error("negative frequency {0}")]
    NegativeFrequency(f64),
    #[error("window {window} exceeds the exact-mode limit {limit}")]
    WindowTooLarge { window: usize, limit: usize },
    #[error("window must be at least 1")]
    EmptyWindow,
    #[error("interval [{start},{end}] is invalid for length {n} (width at most {max_width})")]
    BadInterval {
        start: usize,
        end: usize,
        n: usize,
        max_width: usize,
    },
    #[error("{0}")]
    Mismatch(String),
}

/// Crate-wide error.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Params(#[from] ParamsError),
    #[error(transparent)]
    Constraint(#[from] ConstraintError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error("sequence length {sequence} does not match structure length {structure}")]
    LengthMismatch { sequence: usize, structure: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
