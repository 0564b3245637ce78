use thiserror::Error;

/// Errors shared across the whole crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("covers create a cycle through elements {0} and {1}")]
    CycleDetected(usize, usize),

    #[error("element index {index} out of range for a carrier of size {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("{what} exceeds the configured limit {limit} (needs at least {needed})")]
    SizeLimitExceeded {
        what: String,
        limit: usize,
        needed: usize,
    },

    #[error("operation is only defined on distributive lattices")]
    NotDistributive,

    #[error("operation requires a lattice, but some pair has no join or no meet")]
    NotALattice,

    #[error("map is not monotone: {x} <= {y} but image({x}) is not <= image({y})")]
    NotMonotone { x: usize, y: usize },

    #[error("maps or relations live on different carriers")]
    MixedCarriers,

    #[error("nucleus axioms do not hold: {0}")]
    NucleusNotVerified(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
