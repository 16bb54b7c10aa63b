//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("dimension {dim} exceeds the configured cap of {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("matrix is not Hermitian: residual {residual:.3e} exceeds {tolerance:.3e}")]
    NotHermitian { residual: f64, tolerance: f64 },

    #[error("eigendecomposition did not converge")]
    EigFailed,

    #[error("singular value decomposition did not converge")]
    SvdFailed,

    #[error("site {site} out of range for {n_qubits} qubits")]
    SiteOutOfRange { site: usize, n_qubits: usize },

    #[error("keep set must be a nonempty subset of the qubit sites")]
    EmptyKeepSet,

    #[error("state is a product state across the first-qubit cut (Schmidt rank 1)")]
    RankDeficient,

    #[error("operator triple failed verification: {0}")]
    InvalidTriple(String),

    #[error("operator triples do not commute: max commutator entry {0:.3e}")]
    LocalityViolation(f64),

    #[error("invalid state vector: {0}")]
    InvalidState(String),

    #[error("invalid write axis: {0}")]
    InvalidAxis(String),

    #[error("invalid Pauli letter {0:?}: expected one of I, X, Y, Z")]
    InvalidPauliLetter(char),

    #[error("a single-qubit system has no complement to host an involution")]
    NoComplement,

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}
