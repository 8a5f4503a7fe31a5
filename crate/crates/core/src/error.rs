use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("velocity field is not finite at ({x}, {y})")]
    NonFiniteField { x: f64, y: f64 },

    #[error("index {index} out of range for {what} (len {len})")]
    OutOfRange {
        what: &'static str,
        index: usize,
        len: usize,
    },

    #[error("sampling window is empty")]
    EmptyWindow,

    #[error("relative speeds sum to zero; distribution is undefined")]
    DegenerateDistribution,

    #[error("interest set has {0} members; entropy normalizer needs at least 2")]
    InterestSetTooSmall(usize),

    #[error("probability is zero; expected wait is unbounded")]
    ZeroProbability,

    #[error("gain denominator is zero")]
    ZeroDenominator,

    #[error("snapshot has {found} nodes, expected {expected}")]
    MismatchedSnapshot { expected: usize, found: usize },

    #[error("report value `{quantity}` = {value} is not finite and nonnegative")]
    InvalidReportValue { quantity: String, value: f64 },

    #[error("codec `{codec}` failed: {source}")]
    Codec {
        codec: &'static str,
        #[source]
        source: io::Error,
    },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
