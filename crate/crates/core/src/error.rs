use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or out-of-range argument (negative weight, r > m, ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Arguments are well formed but fall outside the range where the
    /// checked statement is claimed to hold.
    #[error("out of scope: {0}")]
    OutOfScope(String),

    /// A rational function was evaluated at a pole.
    #[error("singular evaluation: {0}")]
    Singular(String),

    /// The input to a conditional check did not satisfy its hypothesis.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// Two independent routes disagreed, or a proven statement was
    /// contradicted. Results computed after this are not trustworthy.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub fn is_fatal(&self) -> bool {
        matches!(self, Error::Invariant(_))
    }
}
