use thiserror::Error;

/// Errors raised by state, operator, circuit and entanglement routines.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("mode count must be at least 1")]
    ZeroModes,
    #[error("mode count {0} exceeds the supported maximum of 64")]
    TooManyModes(usize),
    #[error("mode index {mode} is out of range 1..={m}")]
    ModeOutOfRange { mode: usize, m: usize },
    #[error("two-mode element needs distinct modes, got {0} twice")]
    RepeatedMode(usize),
    #[error("invalid occupation vector: {0}")]
    InvalidOccupation(String),
    #[error("statistical parameter must be finite, got {0}")]
    NonFinitePhi(f64),
    #[error("mode counts differ: {0} vs {1}")]
    ModeCountMismatch(usize, usize),
    #[error("statistical parameters differ: {0} vs {1}")]
    PhiMismatch(f64, f64),
    #[error("state has no definite particle number")]
    IndefiniteParticleNumber,
    #[error("expected {expected} particles, found {found}")]
    WrongParticleNumber { expected: usize, found: usize },
    #[error("state is the zero vector")]
    ZeroState,
    #[error("invalid Bogoliubov transformation: {0}")]
    InvalidBogoliubov(String),
    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),
    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),
    #[error("gate #{index} ({gate}) is outside the classically simulable family: {reason}")]
    OutOfFamily {
        index: usize,
        gate: String,
        reason: String,
    },
    #[error("unknown engine '{0}'")]
    UnknownEngine(String),
}

pub type Result<T> = std::result::Result<T, Error>;
