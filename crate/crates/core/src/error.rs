use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// No matching of `A_r` into `B` exists; carries the first infeasible r.
    #[error("no matching of A_r into B at r = {0}")]
    NoMatching(usize),

    #[error("no perfect matching exists")]
    NoPerfectMatching,

    #[error("vertex count {0} is odd; perfect matching requires an even count")]
    OddVertexCount(usize),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A negative alternating cycle was found, so the supplied matching
    /// cannot be optimal.
    #[error("optimality violation: negative alternating cycle detected")]
    OptimalityViolation,

    #[error("numeric error: {0}")]
    Numeric(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
