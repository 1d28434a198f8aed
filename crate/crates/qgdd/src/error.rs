use thiserror::Error;

/// Errors shared across the crate. Variants carry enough context to point at
/// the offending object without dragging whole structures along.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    NonPrimeModulus(u32),

    #[error("polynomial is not primitive over GF({q}): {reason}")]
    NonPrimitivePolynomial { q: u32, reason: String },

    #[error("no built-in primitive polynomial for GF({q}^{g}); supply one explicitly")]
    NoDefaultPolynomial { q: u32, g: u32 },

    #[error("field order {order} exceeds the supported bound {bound}")]
    FieldTooLarge { order: u128, bound: u128 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("ambient space mismatch: {0}")]
    AmbientMismatch(String),

    #[error("expected a 1-dimensional subspace, got dimension {0}")]
    NotAPoint(usize),

    #[error("row encoding {enc} is out of range for GF({q})^{v}")]
    EncodingOutOfRange { enc: u64, q: u32, v: u16 },

    #[error("subspace constraint requires a spread")]
    ConstraintRequiresSpread,

    #[error("elements do not partition the nonzero points: {0}")]
    NotAPartition(String),

    #[error("group-set must contain more than one element")]
    TrivialGroupSet,

    #[error("duplicate blocks: {0}")]
    DuplicateBlocks(String),

    #[error("block dimension mismatch: expected {expected}, found {found}")]
    BlockDimensionMismatch { expected: u16, found: u16 },

    #[error("block {block:?} contains the spread-covered line {line:?}")]
    BlockMeetsGroupBadly { block: Vec<u64>, line: Vec<u64> },

    #[error("enumeration size {size} exceeds the limit {limit}; raise the limit to proceed")]
    TooLarge { size: u128, limit: u128 },

    #[error("no constant maximum index exists for this spread and k")]
    NoLambdaMax,

    #[error("subspace is not fat: {0}")]
    NotFat(String),

    #[error("wrong dimension: expected {expected}, found {found}")]
    WrongDimension { expected: usize, found: usize },

    #[error("a class selection is required when k equals s")]
    SelectionRequired,

    #[error("selected class {0} is not a determinant-class label")]
    SelectionOutOfRange(u32),

    #[error("sampled line {line:?} lies in {count} blocks; input is not a Steiner system")]
    NotSteinerSampled { line: Vec<u64>, count: u64 },

    #[error("group does not stabilize the spread: element {element:?} maps outside it")]
    GroupDoesNotStabilizeSpread { element: Vec<u64> },

    #[error("group closure exceeded the cap of {0} elements")]
    GroupTooLarge(u64),

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("decode error: {0}")]
    DecodeError(String),
}

pub type Result<T> = std::result::Result<T, Error>;
