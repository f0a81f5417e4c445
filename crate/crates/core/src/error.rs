use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ground set size must be positive")]
    EmptyGroundSet,

    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("label {0} is outside the supported range 1..={max}", max = crate::ncpart::MAX_LABEL)]
    LabelOutOfRange(usize),

    #[error("not a permutation: {0}")]
    InvalidPermutation(String),

    #[error("not a set partition: {0}")]
    InvalidPartition(String),

    #[error("partition is crossing")]
    Crossing,

    #[error("ground sets differ")]
    GroundMismatch,

    #[error("invalid factorization type: {0}")]
    InvalidType(String),

    #[error("invalid chain: {0}")]
    InvalidChain(String),

    #[error("invalid factorization: {0}")]
    InvalidFactorization(String),

    #[error("product does not match: {0}")]
    FactorizationMismatch(String),

    #[error("prefix product {0} does not lie on a geodesic from the identity to the long cycle")]
    NotGeodesic(String),

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An internal consistency check failed. This would falsify one of the
    /// identities the library is built on.
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
