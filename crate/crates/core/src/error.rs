use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// A closed-part partition could not be certified with the supplied
    /// desk-scale parameters.
    #[error("partition not certified: {0}")]
    PartitionNotCertified(String),

    /// The bounded search in the coefficient bound hit its cap without
    /// settling the minimal representation.
    #[error("coefficient search cap {cap} exceeded while representing {vector}")]
    CoefficientCapExceeded { cap: usize, vector: String },

    /// An absorption step ran out of usable absorbing sets.
    #[error("absorber supply exhausted for set {0}")]
    SupplyExhausted(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
