use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square or has inconsistent rows")]
    NotSquare,

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("eigensolver did not converge after {0} sweeps")]
    NoConvergence(usize),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("dimension {0} outside supported range {1}..={2}")]
    DimensionOutOfRange(usize, usize, usize),

    #[error("state vector is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("zero vector cannot be normalized")]
    ZeroVector,

    #[error("density operator trace is {0}, expected 1")]
    InvalidTrace(f64),

    #[error("density operator is not positive semidefinite (min eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("log base must be finite and > 1, got {0}")]
    InvalidLogBase(f64),

    #[error("observable has a degenerate spectrum; {0}")]
    Degenerate(&'static str),

    #[error("a measurement chain needs between {min} and {max} observables, got {got}")]
    ChainLength { min: usize, max: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("objective returned a non-finite value")]
    NonFiniteObjective,

    #[error("optimizer failed: no start converged")]
    OptimizerFailure,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
