use thiserror::Error;

/// Errors raised by grid construction, field arithmetic and the fractional operators.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum FracError {
    #[error("invalid domain: require {lo_name} < {hi_name}, got {lo} and {hi}")]
    DomainOrder {
        lo_name: &'static str,
        hi_name: &'static str,
        lo: f64,
        hi: f64,
    },
    #[error("need at least 2 nodes per axis, got {0}")]
    TooFewNodes(usize),
    #[error("fractional order must lie in (0, 1), got {0}")]
    InvalidOrder(f64),
    #[error("non-finite value {value} at node {node:?}")]
    NonFinite { node: (usize, usize), value: f64 },
    #[error("fields live on different grids")]
    GridMismatch,
    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("argument outside the domain: {0}")]
    Domain(String),
    #[error("malformed field data: {0}")]
    Format(String),
    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("invalid solver options: {0}")]
    InvalidOptions(String),
}

pub type Result<T> = std::result::Result<T, FracError>;
