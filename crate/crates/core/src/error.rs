use thiserror::Error;

pub type Result<T> = std::result::Result<T, QfError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QfError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix dimension must be at least 1")]
    EmptyDimension,

    #[error("expected {expected} entries, found {found}")]
    WrongEntryCount { expected: usize, found: usize },

    #[error("non-finite entry at index {index}")]
    NonFinite { index: usize },

    #[error("invalid subsystem specification: {0}")]
    InvalidSubsystems(String),

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not unitary (max deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("matrix is not a projector (max deviation {deviation:e})")]
    NotProjector { deviation: f64 },

    #[error("vector is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("trace is {trace}, expected 1")]
    TraceNotUnit { trace: f64 },

    #[error("operator is not positive semi-definite (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("not informationally complete (rank {rank} of {required})")]
    NotInformationallyComplete { rank: usize, required: usize },

    #[error("measure not representable (residual {residual:e})")]
    MeasureNotRepresentable { residual: f64 },

    #[error("invalid Kraus channel: {0}")]
    InvalidChannel(String),

    #[error("ensembles distinguishable a priori (average states differ by {deviation:e})")]
    EnsemblesDistinguishable { deviation: f64 },

    #[error("conditioning on null event (probability {probability:e})")]
    NullConditioningEvent { probability: f64 },

    #[error("relative speed {speed} violates V^2 < eta = {eta}")]
    SpeedLimitExceeded { speed: f64, eta: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
