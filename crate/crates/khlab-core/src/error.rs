//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors raised while parsing diagrams or running the pipelines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("malformed PD token at byte {offset}: {detail}")]
    MalformedToken { offset: usize, detail: String },

    #[error("edge label {label} appears {count} times (expected exactly twice, labels 1..={max})")]
    EdgeCountError { label: u32, count: usize, max: u32 },

    #[error("diagram cannot be oriented consistently: {0}")]
    OrientationError(String),

    #[error("torus knot T(2,{0}) needs an odd parameter >= 3")]
    EvenParameter(usize),

    #[error("resolution has {got} bits but the diagram has {expected} crossings")]
    LengthMismatch { expected: usize, got: usize },

    #[error("{what} = {value} exceeds the limit {limit}")]
    SizeLimitExceeded { what: &'static str, value: usize, limit: usize },

    #[error("eigensolver stalled after {iterations} iterations (relative residual {residual:.3e})")]
    ConvergenceFailure { iterations: usize, residual: f64 },

    #[error("subset search skipped: {vertices} vertices exceeds {limit}")]
    SubsetSearchSkipped { vertices: usize, limit: usize },

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("only {accepted} projections accepted (need at least {needed})")]
    InsufficientAcceptances { accepted: u64, needed: u64 },
}

impl Error {
    /// Coarse category used to pick process exit codes.
    pub fn category(&self) -> ErrorCategory {
        match self {
            Error::MalformedToken { .. }
            | Error::EdgeCountError { .. }
            | Error::OrientationError(_)
            | Error::EvenParameter(_)
            | Error::LengthMismatch { .. }
            | Error::DomainError(_) => ErrorCategory::Input,
            Error::SizeLimitExceeded { .. } | Error::SubsetSearchSkipped { .. } => {
                ErrorCategory::Resource
            }
            Error::ConvergenceFailure { .. } | Error::InsufficientAcceptances { .. } => {
                ErrorCategory::Numerical
            }
        }
    }
}

/// Error classes mapped onto CLI exit codes 2, 3 and 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    Input,
    Resource,
    Numerical,
}

pub type Result<T> = std::result::Result<T, Error>;
