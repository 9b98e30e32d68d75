use thiserror::Error;

/// Errors raised by the simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("negative occupation {value} in mode {mode}")]
    NegativeOccupation { mode: usize, value: i64 },

    #[error("mode count mismatch: {left} vs {right}")]
    ModeMismatch { left: usize, right: usize },

    #[error("mode {mode} out of range for {modes} modes")]
    ModeOutOfRange { mode: usize, modes: usize },

    #[error("element uses mode {0} twice")]
    RepeatedMode(usize),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not unitary (deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("herald pattern is empty")]
    EmptyPattern,

    #[error("state is not normalized (norm^2 = {norm_sqr})")]
    Unnormalized { norm_sqr: f64 },

    #[error("state has zero norm")]
    ZeroState,

    #[error("state has no component in the logical subspace")]
    NoLogicalContent,

    #[error("qubit count mismatch: expected {expected}, found {found}")]
    QubitMismatch { expected: usize, found: usize },

    #[error("qubit {qubit} out of range for {qubits} qubits")]
    QubitOutOfRange { qubit: usize, qubits: usize },

    #[error("state is entangled; no pure single-qubit description")]
    Entangled,

    #[error("node {0} has already been measured")]
    AlreadyMeasured(usize),

    #[error("node {node}: {reason}")]
    Adaptivity { node: usize, reason: String },

    #[error("node {node} cannot be measured yet: {reason}")]
    Ordering { node: usize, reason: String },

    #[error("no valid flow target for node {0}")]
    NoFlow(usize),

    #[error("cluster of {nodes} nodes exceeds the cap of {cap}")]
    ClusterTooLarge { nodes: usize, cap: usize },

    #[error("forced outcome {outcome} has zero probability")]
    ImpossibleOutcome { outcome: String },
}

pub type Result<T> = std::result::Result<T, Error>;
