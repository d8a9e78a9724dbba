//! Error type shared by every fallible operation in this crate.

use core::fmt;

/// Why an operation could not produce a result.
///
/// Two kinds cover everything the library can reject: a caller handed us an
/// argument that violates a documented precondition, or a numerical procedure
/// could not meet its accuracy contract. Messages are static so the type
/// stays allocation-free under `no_std`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Error {
    /// A caller-supplied value violated a documented precondition
    /// (bad dimension, angle out of range, empty input, ...).
    InvalidArgument(&'static str),
    /// A numerical procedure failed: an iteration did not converge or an
    /// input was degenerate in a way only detectable mid-computation.
    Numeric(&'static str),
}

impl Error {
    /// The human-readable description carried by this error.
    pub fn message(&self) -> &'static str {
        match self {
            Error::InvalidArgument(m) | Error::Numeric(m) => m,
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument(m) => write!(f, "invalid argument: {m}"),
            Error::Numeric(m) => write!(f, "numeric failure: {m}"),
        }
    }
}

impl core::error::Error for Error {}

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
