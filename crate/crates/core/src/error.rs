use thiserror::Error;

/// Errors raised by the engine.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum StarError {
    #[error("index {0} is outside {{1,2,3}}")]
    IndexOutOfRange(i64),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("arity mismatch: expected {expected}, got {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("jet variable {0} present but no value for it was supplied")]
    MissingPotential(String),

    #[error("level {0} is missing from the star product")]
    MissingLevel(usize),

    #[error("cocycle condition violated at level {level}: delta(R) has {terms} nonzero terms")]
    NotCocycle { level: usize, terms: usize },

    #[error("delta(M) = R is infeasible at level {level}: {reason}")]
    Infeasible { level: usize, reason: String },

    #[error("obstruction at level {level} is nonzero")]
    ObstructionNonzero { level: usize },

    #[error("grading violation at level {level}: {detail}")]
    Grading { level: usize, detail: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("malformed abstract term: {0}")]
    MalformedTerm(String),

    #[error("serialization error: {0}")]
    Serde(String),
}

pub type Result<T> = std::result::Result<T, StarError>;
