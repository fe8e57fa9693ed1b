use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid truncation {0}: a resonator needs at least 2 Fock levels")]
    InvalidTruncation(usize),

    #[error("site index {index} out of range for a space with {sites} sites")]
    SiteOutOfRange { index: usize, sites: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("operators or states live on different Hilbert spaces")]
    SpaceMismatch,

    #[error("shape mismatch in {field}: expected {expected}, got {actual}")]
    ShapeMismatch {
        field: &'static str,
        expected: String,
        actual: String,
    },

    #[error("non-finite coefficient in {0}")]
    NonFinite(&'static str),

    #[error("schedule fraction {0} outside [0, 1]")]
    ScheduleOutOfRange(f64),

    #[error("drive frequency is not set")]
    MissingDriveFrequency,

    #[error("operator is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("lowest gap {gap:e} below {threshold:e}; instantaneous ground state is degenerate")]
    DegenerateGap { gap: f64, threshold: f64 },

    #[error("integration failed at t = {time}: {reason} (last error estimate {error_estimate:e})")]
    IntegrationFailure {
        time: f64,
        error_estimate: f64,
        reason: String,
    },

    #[error("invalid anneal run: {0}")]
    InvalidRun(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("ill-posed instance: sector system is singular (condition number {0:e})")]
    IllPosed(f64),

    #[error("instance with K = {0} lines exceeds the enumeration budget (K <= 20)")]
    TooManyLines(usize),
}
