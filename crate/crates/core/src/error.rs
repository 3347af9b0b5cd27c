use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("no value assigned to indeterminate {0}")]
    MissingAssignment(&'static str),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("coordinate {coord} of vertex {vertex:?} is out of range")]
    CoordinateOutOfRange { vertex: Vec<u32>, coord: usize },

    #[error("vertex {0:?} does not match the number of base graphs")]
    WrongArity(Vec<u32>),

    #[error("vertex set mixes bipartition classes")]
    MixedClass,

    #[error("root is not a member of the set")]
    RootMissing,

    #[error("invalid base graph: {0}")]
    InvalidBaseGraph(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("negative exponent in normalized weight ({0})")]
    ExponentSign(String),

    #[error("graph has {n} vertices, above the enumeration limit {limit}")]
    SizeLimit { n: usize, limit: usize },

    #[error("side mismatch: set is not contained in the requested class")]
    SideMismatch,

    #[error("identity violated: {0}")]
    IdentityViolation(String),

    #[error("numeric error: {0}")]
    Numeric(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
