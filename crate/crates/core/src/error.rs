use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid alpha literal {literal:?}: {reason}")]
    InvalidAlpha { literal: String, reason: String },

    #[error("invalid phase family: {0}")]
    InvalidFamily(String),

    #[error("index must be >= 1")]
    ZeroIndex,

    #[error("index {n} out of range for custom family of length {len}")]
    IndexOutOfRange { n: u64, len: usize },

    #[error("index {n} exceeds the validated precision range (limit {limit}); use the oracle path")]
    PrecisionRangeExceeded { n: u64, limit: u64 },

    #[error("oracle does not support the {0} family")]
    UnsupportedFamily(&'static str),

    #[error("empty input")]
    EmptyInput,

    #[error("value {0} is not in [0, 1)")]
    NotUnitInterval(f64),

    #[error("annulus window R={r}, h={h} contains no indices")]
    EmptyWindow { r: f64, h: f64 },

    #[error("at least {needed} points required, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("sector has zero measure")]
    ZeroMeasure,

    #[error("region lies outside the generated radial range (data radius {data_radius})")]
    RegionOutsideRange { data_radius: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
