use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("invalid exponent {0}: must lie in [1, inf]")]
    InvalidExponent(f64),

    #[error("unsupported exponent {0} for this operation")]
    UnsupportedExponent(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("sampled function is not convex at grid index {index}")]
    NotConvex { index: usize },

    #[error("zero vector has no dual extremizer")]
    ZeroVector,

    #[error("linear functional exceeds the gauge on the subspace")]
    NotDominated,

    #[error("extension failed its domination certificate")]
    CertificationFailed,

    #[error("vectors are linearly dependent")]
    LinearlyDependent,

    #[error("direction is not absorbed by the gauge up to scale 2^60")]
    NonAbsorbing,

    #[error("cone membership is limited to {max} generators, got {got}")]
    TooManyGenerators { max: usize, got: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("Jacobi iteration did not converge in {sweeps} sweeps (off-diagonal {off:e})")]
    NotConverged { sweeps: usize, off: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eig:e})")]
    NotPositiveSemidefinite { min_eig: f64 },

    #[error("spectral norm {norm} is not below one")]
    NormNotBelowOne { norm: f64 },

    #[error("numeric overflow: {0}")]
    Overflow(&'static str),

    #[error("inputs not normalized: {0}")]
    NotNormalized(String),

    #[error("function takes complex values")]
    ComplexValued,

    #[error("negative value where a nonnegative one is required: {0}")]
    Negative(String),

    #[error("index out of range: {0}")]
    OutOfRange(String),

    #[error("malformed product key")]
    MalformedKey,

    #[error("precondition failed for {mode} convergence: {reason}")]
    ConvergencePrecondition { mode: &'static str, reason: String },

    #[error("parse error: {0}")]
    Parse(String),
}

pub(crate) fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
