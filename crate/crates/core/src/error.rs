use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |M - M^H| = {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("logarithm of a matrix with negative eigenvalue {eigenvalue:e}")]
    NegativeSpectrum { eigenvalue: f64 },
    #[error("logarithm of a singular matrix is unbounded")]
    SingularLogarithm,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimMismatch { expected: usize, found: usize },
    #[error("non-finite or malformed matrix data: {0}")]
    InvalidMatrix(String),
    #[error("invalid density matrix: {0} invariant violated")]
    InvalidDensity(&'static str),
    #[error("problem size {size} exceeds the supported limit {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("machine declares no hidden layer")]
    NoHiddenLayer,
    #[error("invalid machine: {0}")]
    InvalidMachine(String),
    #[error("gradient is not finite")]
    NonFiniteGradient,
    #[error("annealing schedule is empty")]
    EmptySchedule,
    #[error("invalid annealing schedule: {0}")]
    InvalidSchedule(String),
    #[error("observable is proportional to the identity; no quantum advantage possible")]
    ZeroTraceless,
    #[error("state vector is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },
    #[error("basis index {index} out of range for {levels} levels")]
    IndexOutOfRange { index: usize, levels: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("padding amplitude {amplitude:e} leaked outside the physical subspace")]
    PaddingLeak { amplitude: f64 },
}
