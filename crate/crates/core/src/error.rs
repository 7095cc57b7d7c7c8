use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("base must be an integer >= 2, got {0}")]
    InvalidBase(u64),

    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("{value} is not an element of Z[1/{n}]")]
    NotInZ1n { value: String, n: u32 },

    #[error("invalid base point: {0}")]
    InvalidBasePoint(String),

    #[error("digit budget of {budget} exhausted")]
    BudgetExhausted { budget: usize },

    #[error("operation not supported on digit-stream points: {0}")]
    StreamUnsupported(&'static str),

    #[error("base points have different representation kinds")]
    MixedKinds,

    #[error("element {0} has s = 0 and no unique fixed point")]
    NoFixedPoint(String),

    #[error("cone tag {tag} is incompatible with base {base}")]
    TagBaseMismatch { tag: String, base: String },

    #[error("unknown cone tag {0:?}")]
    UnknownTag(String),

    #[error("every point of the sequence is fixed by {0}")]
    InsufficientPoints(String),

    #[error("membership undecided within the digit budget")]
    Undecided,

    #[error("inconsistent oracle: {0}")]
    InconsistentOracle(String),

    #[error("invalid tail witness: {0}")]
    InvalidWitness(String),

    #[error("duplicate element in enumeration: {0}")]
    DuplicateElement(String),

    #[error("malformed JSON: {0}")]
    Json(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
