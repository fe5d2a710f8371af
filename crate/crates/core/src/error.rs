use thiserror::Error;

use crate::arith::Field;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(Field, Field),
    #[error("vector of length {len} in ambient dimension {ambient}")]
    VectorLength { len: usize, ambient: usize },
    #[error("subspace is not contained in the enclosing block")]
    NotContained,
    #[error("invalid modulus {0}: expected a prime below 2^32")]
    InvalidModulus(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid scalar {0:?}")]
    InvalidScalar(String),
    #[error("invalid probability vector: {0}")]
    InvalidProbability(String),
    #[error("tuple index {index} out of range for a system of {len} tuples")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("element {element} outside the ground set [1, {n}]")]
    ElementOutOfRange { element: usize, n: usize },
    #[error("ground size {0} exceeds the supported maximum of 64 for set systems")]
    GroundTooLarge(usize),
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("system has no partition or decomposition attached")]
    MissingContext,
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("tuple {0} is not compatible with the decomposition")]
    NotCompatible(usize),
    #[error("not licensed: {0}")]
    NotLicensed(String),
    #[error("non-uniform profile: {0}")]
    NonUniform(String),
    #[error("no cardinality bound applies to the verified condition")]
    NoApplicableBound,
    #[error("element {element} already covered by tuple {index}")]
    AlreadyCovered { index: usize, element: usize },
    #[error("tuple {index} is already full{}", block.map(|k| format!(" in block {k}")).unwrap_or_default())]
    AlreadyFull { index: usize, block: Option<usize> },
    #[error("fill-up of tuple {index} produced a tuple already present in the system")]
    DuplicateTuple { index: usize },
    #[error("invariant broken: {0}")]
    InvariantBroken(String),
    #[error("type class {profile} has {count} members, above its bound {bound}")]
    ClassBoundViolated {
        profile: String,
        count: usize,
        bound: String,
    },
    #[error("ground too large for exhaustive enumeration: {0}")]
    EnumerationTooLarge(String),
    #[error("parse error: {0}")]
    Parse(String),
}
