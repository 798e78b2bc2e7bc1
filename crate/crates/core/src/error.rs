use thiserror::Error;

/// Errors raised by the qrigid pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("backend mismatch: cannot mix exact and float scalars")]
    BackendMismatch,
    #[error("empty input")]
    EmptyInput,
    #[error("vector of length {found} cannot be unvectorized (expected {expected})")]
    LengthMismatch { expected: usize, found: usize },
    #[error("matrix is not Hermitian (residual {residual:e})")]
    NotHermitian { residual: f64 },
    #[error("matrix {index} of the tuple is not traceless (|tr| = {trace:e})")]
    NotTraceless { index: usize, trace: f64 },
    #[error("tuple element {index} is not Hermitian")]
    NotHermitianTuple { index: usize },
    #[error("Gram matrix is singular; tuple is linearly dependent")]
    GramSingular,
    #[error("{0} requires square roots and is unavailable for the exact backend")]
    ExactBackendUnsupported(&'static str),
    #[error("operator system is degenerate (no nonzero basis element)")]
    DegenerateSystem,
    #[error("operator system basis is not self-adjoint")]
    NotSelfAdjoint,
    #[error("operator system does not contain the unit")]
    MissingUnit,
    #[error("Kraus vectors violate the normalization (2/3)Re<a_i|a_j> = delta_ij (residual {residual:e})")]
    NormalizationViolated { residual: f64 },
    #[error("index {index} out of range (size {size})")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("invalid group table: {0}")]
    InvalidGroup(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::InvalidInput(e.to_string())
    }
}
