use thiserror::Error;

/// Errors produced by the solver library. Site and genotype indices in
/// messages are 1-based; all internal indexing is 0-based.
#[derive(Debug, Error)]
pub enum Error {
    #[error("length mismatch: expected {expected} sites, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("haplotype is incompatible with the genotype at site {site}")]
    Incompatible { site: usize },

    #[error("instance has no genotypes")]
    EmptyInstance,

    #[error("unknown genotype id g{id}")]
    UnknownGenotype { id: usize },

    #[error("genotype g{genotype} is not resolved by its assigned pair")]
    Unresolved { genotype: usize },

    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("instance too large for exhaustive search: {states} resolution states exceed the limit of {limit}")]
    TooManyStates { states: u128, limit: u128 },

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("invalid move: {0}")]
    InvalidMove(String),
}

impl Error {
    pub(crate) fn parse(line: usize, col: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            col,
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
