//! Error type shared across the crate.

use std::fmt;

/// Errors reported by the numerical routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// The `min(x², 1)` integrability test of the Lévy measure diverges.
    NonConvergent(String),
    /// Adaptive quadrature could not reach the requested relative tolerance
    /// within the subdivision budget.
    QuadratureFailure(String),
    /// Name not present in the distribution catalog.
    UnknownDistribution(String),
    /// Parameter outside its admissible range.
    InvalidParam(String),
    /// A closed-form chain was asked for a derivative order it cannot supply.
    DerivativeOrderUnavailable { requested: usize, available: usize },
    /// Rate sequence fails the `Σ a_k² < ∞` admissibility rule.
    InvalidSequence(String),
    /// Tail variance correction requested but no analytic tail is available.
    TailUnknown,
    /// Argument outside the domain of a special function.
    DomainError(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonConvergent(msg) => write!(f, "Levy measure not integrable: {msg}"),
            Error::QuadratureFailure(msg) => write!(f, "quadrature failed to converge: {msg}"),
            Error::UnknownDistribution(name) => write!(f, "unknown distribution: {name}"),
            Error::InvalidParam(msg) => write!(f, "invalid parameter: {msg}"),
            Error::DerivativeOrderUnavailable {
                requested,
                available,
            } => write!(
                f,
                "derivative order {requested} unavailable (chain stores up to {available})"
            ),
            Error::InvalidSequence(msg) => write!(f, "invalid rate sequence: {msg}"),
            Error::TailUnknown => {
                write!(f, "tail correction requested but no analytic tail is available")
            }
            Error::DomainError(msg) => write!(f, "domain error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
