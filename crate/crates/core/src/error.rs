use thiserror::Error;

/// Errors reported by the simulator.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("qubit index {index} out of range for {num_qubits} qubits")]
    QubitOutOfRange { index: usize, num_qubits: usize },

    #[error("duplicate qubit index {0}")]
    DuplicateQubit(usize),

    #[error("matrix is not Hermitian: max |A - A†| = {deviation:.3e} exceeds {tolerance:.1e}")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("matrix is not unitary: max |U†U - I| = {deviation:.3e} exceeds {tolerance:.1e}")]
    NotUnitary { deviation: f64, tolerance: f64 },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid architecture: {0}")]
    InvalidArchitecture(String),

    #[error("empty batch: {0}")]
    EmptyBatch(String),

    #[error("invalid dataset parameter: {0}")]
    InvalidDataset(String),

    #[error("batch size {requested} exceeds pool size {available}")]
    BatchTooLarge { requested: usize, available: usize },

    #[error("parameter vector has {got} entries, circuit expects {expected}")]
    ParameterCount { got: usize, expected: usize },

    #[error("non-finite loss value encountered")]
    NonFiniteLoss,

    #[error("{0}")]
    Other(String),
}
