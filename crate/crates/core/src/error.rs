use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix shape mismatch: expected {expected}, got {got}")]
    Shape { expected: String, got: String },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("matrix is not square ({nrows}x{ncols})")]
    NotSquare { nrows: usize, ncols: usize },

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("invalid subsystem selection: {0}")]
    InvalidSubsystem(String),

    #[error("parameter `{name}` = {value} outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("probabilities sum to {sum}, expected 1")]
    ProbabilityMismatch { sum: f64 },

    #[error("state is not Bell-diagonal (max residual {residual:e})")]
    NotBellDiagonal { residual: f64 },

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off:e})")]
    EigenNoConvergence { sweeps: usize, off: f64 },

    #[error("optimizer did not converge: {0}")]
    NoConvergence(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("net record {index} carries no state")]
    MissingState { index: usize },

    #[error("incomplete tomography: {0}")]
    IncompleteSettings(String),

    #[error("unsupported qubit count {0}")]
    UnsupportedQubits(usize),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("cannot parse angle `{0}`")]
    AngleParse(String),
}
