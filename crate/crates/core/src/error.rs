use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("edge set contains a cycle through vertex {0}")]
    Cycle(usize),

    #[error("{qubits} qubits exceeds the simulation cap of {cap}")]
    TooManyQubits { qubits: usize, cap: usize },

    #[error("eigensolver did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),

    #[error("vector {index} is not a unit vector (norm = {norm})")]
    NotUnit { index: usize, norm: f64 },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("triangle count {t} out of range for degrees ({di}, {dj})")]
    TriangleCount { t: usize, di: usize, dj: usize },

    #[error("vertex {0} appears in more than one pair")]
    OverlappingPairs(usize),

    #[error("infeasible input: {0}")]
    Infeasible(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
