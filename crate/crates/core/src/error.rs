use thiserror::Error;

/// Errors produced by state construction, protocol steps, and scenario plumbing.
#[derive(Debug, Error)]
pub enum Error {
    #[error("amplitude vector of length {0} is not a power of two")]
    BadAmplitudeCount(usize),

    #[error("register of {0} qubits exceeds the {max}-qubit cap", max = crate::state::MAX_QUBITS)]
    RegisterTooLarge(usize),

    #[error("state is not normalized: |psi|^2 = {0}")]
    NotNormalized(f64),

    #[error("qubit index {index} out of range for a {num_qubits}-qubit register")]
    QubitOutOfRange { index: usize, num_qubits: usize },

    #[error("qubit indices must be distinct, got duplicate {0}")]
    DuplicateQubit(usize),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not unitary (max |U\u{2020}U - I| = {0})")]
    NotUnitary(f64),

    #[error("matrix is not Hermitian (max |A - A\u{2020}| = {0})")]
    NotHermitian(f64),

    #[error("operator trace is {0}, expected 1")]
    TraceNotOne(f64),

    #[error("measurement basis is not orthonormal (|<i|j>| deviation {0})")]
    NotOrthonormal(f64),

    #[error("measurement basis has {got} elements, expected {expected}")]
    IncompleteMeasurementBasis { got: usize, expected: usize },

    #[error("basis does not span the state (residual norm^2 = {0})")]
    BasisDoesNotSpan(f64),

    #[error("copy basis vector {0} matches no extended-basis slot")]
    UnmatchedBasisVector(usize),

    #[error("copy basis vectors {0} and {1} merged into the same extended-basis slot")]
    AmbiguousBasisMerge(usize, usize),

    #[error("cannot fix the phase of a zero vector")]
    ZeroVector,

    #[error("all outcome probabilities vanish")]
    NoOutcomeMass,

    #[error("clone count {0} out of range (need 2..={max})", max = crate::cloner::MAX_CLONE_QUBITS)]
    CloneCountOutOfRange(usize),

    #[error("copy split {n}+{m}+1 does not match batch size {k}")]
    CopySplitMismatch { n: usize, m: usize, k: usize },

    #[error("rotation axis has near-zero length")]
    DegenerateAxis,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("trajectory export needs at least one record")]
    EmptyTrajectory,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
