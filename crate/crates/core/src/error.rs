use thiserror::Error;

/// Errors raised by model evaluation, oracle queries, samplers and estimators.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum NqsError {
    /// A configuration, vector or matrix does not match the dimensions it is used with.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A parameter lies outside its documented domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Every amplitude vanishes, so the network does not encode a normalizable state.
    #[error("InvalidState: {0}")]
    InvalidState(String),

    /// An enumeration would exceed the configured cap.
    #[error("resource limit: {0}")]
    ResourceLimit(String),

    /// The backend cannot produce normalized amplitudes within its caps.
    #[error("NormalizationUnavailable: {0}")]
    NormalizationUnavailable(String),

    /// No configuration with nonzero amplitude was found to start a Markov chain from.
    #[error("ZeroSupportStart: no nonzero-amplitude start configuration after {attempts} draws")]
    ZeroSupportStart { attempts: usize },

    /// An estimator discarded more draws than it was allowed to.
    #[error("estimator discarded {discards} draws (limit {limit})")]
    TooManyDiscards { discards: u64, limit: u64 },

    /// A model or formula file could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = NqsError> = std::result::Result<T, E>;
