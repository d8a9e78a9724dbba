//! Harness-level error type with fixed process exit codes.
//!
//! Every failure the binary can hit maps onto one of three exit codes so
//! scripts can branch on the outcome without parsing stderr:
//!
//! | code | meaning                                                  |
//! |------|----------------------------------------------------------|
//! | 2    | invalid input (bad flag value, unreadable/invalid file)  |
//! | 3    | numeric failure inside the simulation                    |
//! | 4    | an embedded result check failed                          |
//!
//! Success is 0. When a combined run collects several failures, the
//! reported code is the most severe in the order 2 > 3 > 4.

use coexsim_core::Error as CoreError;

/// A failure with a defined process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// The user handed us something unusable: a malformed scenario file,
    /// an out-of-range flag value, an unreadable or unwritable path.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// The simulation itself failed numerically.
    #[error("numeric failure: {0}")]
    Numeric(String),
    /// An embedded result check (suppression bound, curve monotonicity,
    /// probability range) did not hold on the produced outputs.
    #[error("check failed: {0}")]
    CheckFailed(String),
}

impl CliError {
    /// Process exit code for this failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::InvalidInput(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::CheckFailed(_) => 4,
        }
    }

    /// The most severe of two failures (invalid input > numeric > check).
    pub fn worse(self, other: CliError) -> CliError {
        if other.exit_code() < self.exit_code() {
            other
        } else {
            self
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidArgument(m) => CliError::InvalidInput(m.to_string()),
            CoreError::Numeric(m) => CliError::Numeric(m.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::InvalidInput(format!("io: {e}"))
    }
}

/// Harness-wide result alias.
pub type Result<T> = std::result::Result<T, CliError>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_are_fixed() {
        assert_eq!(CliError::InvalidInput("x".into()).exit_code(), 2);
        assert_eq!(CliError::Numeric("x".into()).exit_code(), 3);
        assert_eq!(CliError::CheckFailed("x".into()).exit_code(), 4);
    }

    #[test]
    fn severity_order_prefers_lower_codes() {
        let a = CliError::CheckFailed("a".into());
        let b = CliError::Numeric("b".into());
        assert_eq!(a.worse(b).exit_code(), 3);
        let c = CliError::InvalidInput("c".into());
        let d = CliError::Numeric("d".into());
        assert_eq!(c.worse(d).exit_code(), 2);
        let e = CliError::CheckFailed("e".into());
        let f = CliError::CheckFailed("f".into());
        assert_eq!(e.worse(f).exit_code(), 4);
    }

    #[test]
    fn core_errors_map_by_kind() {
        let e: CliError = CoreError::InvalidArgument("bad angle").into();
        assert_eq!(e.exit_code(), 2);
        assert!(e.to_string().contains("bad angle"));
        let e: CliError = CoreError::Numeric("no convergence").into();
        assert_eq!(e.exit_code(), 3);
    }
}
