//! Error type shared by all modules.

use thiserror::Error;

/// Crate-wide error type.
///
/// Variant choice maps one-to-one onto the CLI exit codes: config and
/// invalid-input problems exit 2, numerical/regime problems exit 3 and
/// I/O problems exit 4.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied value violates a documented precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The inputs are formally valid but outside the regime the formulas
    /// are derived for (e.g. an orbit with v >= c).
    #[error("out of regime: {0}")]
    OutOfRegime(String),

    /// A point where the requested quantity is genuinely singular.
    #[error("singular input: {0}")]
    SingularInput(String),

    /// A non-finite intermediate or a violated numerical contract.
    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    /// One or more configuration problems; all are reported, not just the
    /// first one found.
    #[error("config error: {}", .0.join("; "))]
    Config(Vec<String>),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// Process exit code used by the CLI for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::InvalidInput(_) => 2,
            Error::OutOfRegime(_) | Error::SingularInput(_) | Error::NumericalFailure(_) => 3,
            Error::Io(_) => 4,
        }
    }
}
