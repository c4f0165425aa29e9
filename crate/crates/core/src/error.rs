use thiserror::Error;

/// Errors shared by the whole crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Two values built over different dimensions `m` were combined.
    #[error("dimension mismatch: {left} vs {right} in {op}")]
    DimensionMismatch {
        left: u32,
        right: u32,
        op: &'static str,
    },

    /// A parameter choice makes one of the structural denominators vanish.
    #[error("degenerate parameter: {what} vanishes for m={m}, k={k}")]
    DegenerateParameter { what: &'static str, m: u32, k: u32 },

    /// A precondition on the input polynomial or parameters was violated.
    #[error("domain error: {0}")]
    Domain(String),

    /// An unknown operator, space or identity name was requested.
    #[error("unknown name: {0}")]
    UnknownName(String),

    /// An exact verification found a nonzero difference; the witness is the
    /// canonical text form of the offending value.
    #[error("verification failed: {check}: {witness}")]
    CheckFailed { check: String, witness: String },
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
