use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("operation requires exactly {required} points, got {got}")]
    WrongPointCount { required: usize, got: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("point count mismatch: {left} vs {right}")]
    CountMismatch { left: usize, right: usize },

    #[error("operation requires dimension {required}, configuration has {got}")]
    UnsupportedDimension { required: usize, got: usize },

    #[error("all points coincide, the maximal distance is zero")]
    DegenerateScale,

    #[error("invalid pair {{{0}, {1}}}")]
    InvalidPair(usize, usize),

    #[error("expected {expected} arguments, got {got}")]
    WrongArgumentCount { expected: usize, got: usize },

    #[error("not a permutation: {0}")]
    InvalidPermutation(String),

    #[error("matrix is not orthogonal")]
    NotOrthogonal,

    #[error("invalid distance matrix: {0}")]
    InvalidDistanceMatrix(String),

    #[error("{0}")]
    TooLarge(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
