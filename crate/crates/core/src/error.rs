use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A register, model, or instance exceeds what the simulator or
    /// enumerator can hold.
    #[error("capacity exceeded: {what} needs {required}, limit is {limit}")]
    Capacity {
        what: String,
        required: usize,
        limit: usize,
    },
    #[error("qubit index {index} out of range for a {num_qubits}-qubit register")]
    QubitIndex { index: usize, num_qubits: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("state norm drifted to {norm} (expected 1)")]
    Normalization { norm: f64 },
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn argument(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub(crate) fn shape(msg: impl Into<String>) -> Self {
        Error::Shape(msg.into())
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Capacity { .. } => 2,
            Error::Parse { .. } | Error::Config(_) | Error::Json(_) => 3,
            _ => 1,
        }
    }
}
