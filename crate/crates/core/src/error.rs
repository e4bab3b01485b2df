use num_bigint::BigInt;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("vertices are affinely dependent")]
    NotASimplex,
    #[error("empty vertex list")]
    EmptyVertexList,
    #[error("vertex index {index} out of range for {len} vertices")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("face selector is empty")]
    EmptySelector,
    #[error("duplicate vertex index {0} in face selector")]
    DuplicateIndex(usize),
    #[error("{vertices} vertices would give too many faces (limit {limit})")]
    TooManyFaces { vertices: usize, limit: usize },
    #[error("normalized volume {volume} exceeds cap {cap}")]
    VolumeTooLarge { volume: BigInt, cap: u64 },
    #[error("scan visited {points} nodes, above the cap {cap}")]
    ScanTooLarge { points: BigInt, cap: u64 },
    #[error("box point coordinate {0} is outside [0, 1)")]
    CoordinateOutOfRange(String),
    #[error("box point coordinates sum to the non-integer {0}")]
    NonIntegralHeight(String),
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("invalid h*-vector: {0}")]
    InvalidHStar(String),
    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),
    #[error("precondition not met: {0}")]
    PreconditionNotMet(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
    /// A proved statement failed on a computed instance. Always a bug.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}
