use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("generator index {index} out of range 1..={bound}")]
    IndexOutOfRange { index: i64, bound: usize },
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("strand count mismatch: {left} vs {right}")]
    StrandMismatch { left: usize, right: usize },
    #[error("operad tag mismatch: {0} vs {1}")]
    TagMismatch(&'static str, &'static str),
    #[error("invalid composition index {index} for arity {arity}")]
    CompositionIndex { index: usize, arity: usize },
    #[error("{0}")]
    Invalid(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("no connecting morphism: {0}")]
    NoConnectingMorphism(String),
    #[error("lambda must be odd, got {0}")]
    EvenLambda(i64),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}
