use thiserror::Error;

/// Errors raised by the group, design and labeling engines.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed permutation text {text:?}: {reason}")]
    Parse { text: String, reason: String },

    #[error("point {point} repeated in permutation")]
    RepeatedPoint { point: usize },

    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },

    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("empty generator list")]
    NoGenerators,

    #[error("not a subgroup: {0}")]
    NotSubgroup(String),

    #[error("group too large for this operation: order {order} exceeds {limit}")]
    GroupTooLarge { order: String, limit: u64 },

    #[error("index {index} exceeds the configured cap {cap}")]
    IndexCap { index: u64, cap: u64 },

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("actions do not share a source group")]
    SourceMismatch,

    #[error("invalid orbit subset: {0}")]
    InvalidSubset(String),

    #[error("pairing requires the same action on both sides")]
    PairingNeedsSameAction,

    #[error("structure is not a uniform 1-design: {0}")]
    NotUniform(String),

    #[error("inadmissible parameters: {0}")]
    Inadmissible(String),

    #[error("graph of {vertices} vertices exceeds the canonization cap {cap}")]
    CanonCap { vertices: usize, cap: usize },

    #[error("automorphism containment failed: {0}")]
    Containment(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
