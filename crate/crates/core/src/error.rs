use thiserror::Error;

/// Errors raised by state construction, the solvers and the closed-form routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("state has (near) zero norm")]
    ZeroState,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid Dicke index k={k} for n={n}")]
    InvalidK { n: usize, k: usize },

    #[error("index {index} out of range for {len} parties")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("problem too large for brute force: {0}")]
    TooLarge(String),

    #[error("Kraus operators are not trace preserving (deviation {0:.3e})")]
    NotTracePreserving(f64),

    #[error("expected a bipartite state, got {0} parties")]
    NotBipartite(usize),

    #[error("expected a two-qubit state with dims [2, 2]")]
    NotTwoQubit,

    #[error("{name} = {value} is outside its domain")]
    OutOfRange { name: &'static str, value: f64 },

    #[error("not a density matrix: {0}")]
    NotDensityMatrix(String),

    #[error("coefficients are not normalized (squared norm {0})")]
    NotNormalized(f64),

    #[error("points must have strictly increasing x")]
    UnsortedInput,

    #[error("grid needs at least 3 points, got {0}")]
    DegenerateGrid(usize),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unsupported state: {0}")]
    UnsupportedState(String),
}

pub type Result<T> = std::result::Result<T, Error>;
