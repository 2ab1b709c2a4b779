use thiserror::Error;

/// Errors shared across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// Polynomial text that does not match the grammar.
    #[error("syntax error at byte {position}: {message}")]
    PolySyntax { position: usize, message: String },

    /// Degree guard tripped while parsing or constructing a polynomial.
    #[error("degree {degree} exceeds the configured limit {limit}")]
    DegreeLimit { degree: usize, limit: usize },

    /// A precondition on the inputs does not hold.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A size or enumeration guard was exceeded.
    #[error("guard exceeded: {0}")]
    GuardExceeded(String),

    /// A decision procedure ran out of certified depth. This is surfaced,
    /// never coerced into a verdict.
    #[error("inconclusive: {0}")]
    Inconclusive(String),

    /// Two routes that must agree (an identity, an unconditional bound, a
    /// cross-check) disagreed beyond tolerance.
    #[error("internal consistency failure: {0}")]
    ConsistencyFailure(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
