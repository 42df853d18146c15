use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}-dimensional input, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid hypermatrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid poset: {0}")]
    InvalidPoset(String),

    #[error("invalid realizer: {0}")]
    InvalidRealizer(String),

    #[error("invalid set family: {0}")]
    InvalidFamily(String),

    #[error("invalid permutation partition: {0}")]
    InvalidPartition(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{what} is {got}, above the cap of {cap} (pass the cap override to force it)")]
    CapExceeded { what: &'static str, got: u128, cap: u128 },

    #[error("not a permutation matrix")]
    NotPermutation,

    #[error("poset dimension exceeds the search cap of {0}")]
    DimensionAboveCap(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
