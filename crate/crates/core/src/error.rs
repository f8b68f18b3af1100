use thiserror::Error;

use crate::accumulators::AlgorithmId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty input")]
    EmptyInput,
    /// A mean exists but the sample variance needs at least two values.
    #[error("insufficient data: need at least 2 values, got {0}")]
    InsufficientData(usize),
    #[error("non-finite value {value} at index {index}")]
    NonFiniteValue { index: usize, value: f64 },
    /// Raised downstream of a cancellation-prone algorithm that produced S < 0.
    #[error("negative variance {0}")]
    NegativeVariance(f64),
    #[error("coefficient of variation is undefined for a zero mean")]
    ZeroMean,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("{0} cannot run in parallel")]
    UnsupportedParallelAlgorithm(AlgorithmId),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
