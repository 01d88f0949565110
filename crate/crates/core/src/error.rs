//! Error type shared by every module of the crate.

use core::fmt;

/// Failure modes of construction, quadrature, and verification routines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation
    /// (pole of a special function, exponent out of range, and so on).
    Domain(&'static str),
    /// The parameter combination is legal but not covered by any
    /// implemented branch.
    Unsupported(&'static str),
    /// An iterative routine exhausted its budget without meeting its
    /// tolerance.
    NoConvergence(&'static str),
    /// A linear or eigenvalue problem turned out singular or ambiguous.
    Degenerate(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Unsupported(msg) => write!(f, "unsupported: {msg}"),
            Error::NoConvergence(msg) => write!(f, "no convergence: {msg}"),
            Error::Degenerate(msg) => write!(f, "degenerate problem: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
