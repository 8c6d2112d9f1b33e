use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("denominator must be nonzero")]
    ZeroDenominator,

    #[error("value {value} lies outside [0,1]")]
    OutOfUnitInterval { value: String },

    #[error("invalid anchors: {0}")]
    BadAnchors(String),

    #[error("cannot parse rational from {input:?}: {reason}")]
    ParseRational { input: String, reason: String },

    #[error("map f_{index} violates the standing surjectivity assumption")]
    NonSurjective { index: u64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("unknown scenario id {0:?}")]
    UnknownScenario(String),

    #[error("invalid parameters: {0}")]
    BadParams(String),

    #[error("invalid system spec: {0}")]
    BadSystemSpec(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
