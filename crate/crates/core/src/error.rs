use thiserror::Error;

/// Errors raised by the simulation library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: {left_rows}x{left_cols} vs {right_rows}x{right_cols}")]
    DimensionMismatch { op: &'static str, left_rows: usize, left_cols: usize, right_rows: usize, right_cols: usize },
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix entry at ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },
    #[error("invalid matrix shape {rows}x{cols} for {len} entries")]
    BadShape { rows: usize, cols: usize, len: usize },
    #[error("permanent of a {size}x{size} matrix exceeds the size cap of {cap}")]
    PermanentTooLarge { size: usize, cap: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("mode {mode} out of range for width {width}")]
    ModeOutOfRange { mode: usize, width: usize },
    #[error("duplicate mode index {0}")]
    DuplicateMode(usize),
    #[error("component acts on {got} mode(s), expected {expected}")]
    ModeArity { expected: usize, got: usize },
    #[error("Fock basis of {size} states exceeds the cap of {cap}")]
    BasisTooLarge { size: usize, cap: usize },
    #[error("photon number mismatch: {input} in, {output} out")]
    PhotonNumberMismatch { input: usize, output: usize },
    #[error("width mismatch: expected {expected} modes, got {got}")]
    WidthMismatch { expected: usize, got: usize },
    #[error("amplitudes are not normalized (norm^2 = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },
    #[error("state outside logical subspace")]
    OutsideLogicalSubspace,
    #[error("invalid register: {0}")]
    InvalidRegister(String),
    #[error("qubits {0} and {1} are not adjacent; route them together with a swap network first")]
    NonAdjacentQubits(usize, usize),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("ancilla mode {0} is occupied")]
    OccupiedAncilla(usize),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
