//! Error types shared by every module.

use std::fmt;

/// Errors produced by the library.
///
/// `Precision` carries the best estimate reached so far together with the
/// error bound that was actually achieved (as a decimal exponent), so callers
/// can decide whether a degraded result is still useful.
#[derive(Debug, Clone)]
pub enum Error {
    /// Invalid configuration (e.g. a zero-digit precision request).
    Config(String),
    /// Input outside an operation's domain (poles, bad ranges, parity).
    Domain(String),
    /// A configured capacity bound was exceeded.
    Capacity(String),
    /// A tolerance could not be reached within the iteration/level caps.
    Precision {
        message: String,
        /// Best estimate at working precision, as a decimal string.
        best_estimate: String,
        /// Achieved bound: |true - estimate| <= 10^achieved_exponent.
        achieved_exponent: i64,
    },
    /// A convergence monitor tripped (diverging or stalled iteration).
    Diagnostics(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Config(m) => write!(f, "configuration error: {m}"),
            Error::Domain(m) => write!(f, "domain error: {m}"),
            Error::Capacity(m) => write!(f, "capacity error: {m}"),
            Error::Precision {
                message,
                best_estimate,
                achieved_exponent,
            } => write!(
                f,
                "precision error: {message} (best estimate {best_estimate}, achieved bound 10^{achieved_exponent})"
            ),
            Error::Diagnostics(m) => write!(f, "diagnostics error: {m}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
