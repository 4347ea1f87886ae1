use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vector has zero norm; no normalized state exists")]
    ZeroVector,

    #[error("vector length {0} is not a power of two (pad before compiling)")]
    NotPowerOfTwo(usize),

    #[error("dimension {0} is not a power of four")]
    NotPowerOfFour(usize),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("index {index} out of range for dimension {dimension}")]
    IndexOutOfRange { index: usize, dimension: usize },

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("gate {0} is not supported here")]
    UnsupportedGate(String),

    #[error("state left the unary subspace at {0}")]
    LeftUnarySubspace(String),

    #[error("{qubits} qubits exceeds the full-state simulator cap of {cap}")]
    TooManyQubits { qubits: usize, cap: usize },

    #[error("no unary outcomes among {total} shots; post-selection has nothing to keep")]
    MitigationStarved { total: u64 },

    #[error("invalid noise parameters: {0}")]
    InvalidNoise(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("class {0} has no training points")]
    EmptyClass(usize),

    #[error("synthetic spec infeasible: {0}")]
    InfeasibleSpec(String),

    #[error("degenerate regression: {0}")]
    DegenerateFit(String),

    #[error("malformed data in {path}: {message}")]
    MalformedData { path: PathBuf, message: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn malformed(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        Error::MalformedData {
            path: path.into(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
