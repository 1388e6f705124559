use thiserror::Error;

/// Hard ceiling imposed by the accelerator's HBM capacity.
pub const HARD_QUBIT_LIMIT: usize = 30;

#[derive(Debug, Error)]
pub enum HpqeError {
    #[error("{n} qubits exceeds the capacity limit of {limit}")]
    Capacity { n: usize, limit: usize },

    #[error("invalid qubit count {0}")]
    InvalidQubitCount(usize),

    #[error("basis index {index} out of range for {n} qubits")]
    BasisIndex { index: usize, n: usize },

    #[error("qubit {qubit} out of range for a {n}-qubit circuit")]
    QubitOutOfRange { qubit: usize, n: usize },

    #[error("control and target must differ (both {0})")]
    SameControlTarget(usize),

    #[error("qubit count mismatch: circuit has {circuit}, state has {state}")]
    QubitMismatch { circuit: usize, state: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("matrix oracle supports at most {max} qubits, got {n}")]
    Size { n: usize, max: usize },

    #[error("expected {expected} rotation angles, got {got}")]
    AngleCount { expected: usize, got: usize },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("malformed binary data: {0}")]
    Format(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, HpqeError>;
