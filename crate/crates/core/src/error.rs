//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit index {index} out of range for {num_qubits}-qubit register")]
    QubitOutOfRange { index: usize, num_qubits: usize },

    #[error("operation requires distinct qubits, got duplicate index {index}")]
    DuplicateQubit { index: usize },

    #[error("state vector norm is {norm}, expected 1 within {tolerance}")]
    NotNormalized { norm: f64, tolerance: f64 },

    #[error("qubit counts differ: {left} vs {right}")]
    QubitCountMismatch { left: usize, right: usize },

    #[error("register of {requested} qubits exceeds the {limit}-qubit simulation limit")]
    TooManyQubits { requested: usize, limit: usize },

    #[error("branch enumeration exceeded the cap of {cap} branches")]
    BranchCapExceeded { cap: usize },

    #[error("conditioned gate references measurement record {record} but only {available} exist")]
    BadMeasurementReference { record: usize, available: usize },

    #[error("target failure probability unreachable: physical error rate {p} is at or above threshold")]
    UnreachableTarget { p: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
