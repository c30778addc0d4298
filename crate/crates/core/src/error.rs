use thiserror::Error;

/// Errors returned by every fallible operation in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Channel parameters violate `0 <= R0 <= R1 <= 1` or the prior constraints.
    #[error("invalid channel pair: {0}")]
    InvalidChannel(String),

    /// A signal distribution failed validation (negative mass, bad normalization, ...).
    #[error("invalid signal distribution: {0}")]
    InvalidDistribution(String),

    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The operation has no valid formula in the requested parameter regime.
    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),

    /// A series could not be resolved to the requested tolerance within the term budget.
    #[error(
        "series truncation failed after {terms} terms (residual mass {residual0:e} / {residual1:e})"
    )]
    TruncationFailure {
        terms: usize,
        residual0: f64,
        residual1: f64,
    },

    /// Dense construction would exceed the configured Hilbert-space cap.
    #[error("Hilbert space dimension {dim} exceeds cap {cap}")]
    Resource { dim: usize, cap: usize },

    /// A numerical check (eigenvalue floor, trace, convergence) failed.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
