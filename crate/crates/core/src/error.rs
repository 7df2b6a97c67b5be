use thiserror::Error;

/// Errors produced by the combinatorial, algebraic and numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("size {value} is outside the supported range {min}..={max}")]
    Bound { value: usize, min: usize, max: usize },

    #[error("expected an even ground-set size, got {0}")]
    Parity(usize),

    #[error("index ({n}, {k}) is outside the natural domain")]
    IndexOutOfRange { n: usize, k: usize },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("partition is not a pair partition")]
    NotPairPartition,

    #[error("invalid Catalan path: {0}")]
    InvalidPath(String),

    #[error("truncation orders differ: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("moment sequence must start with m_0 = 1")]
    NotNormalized,

    #[error("word of total degree {degree} exceeds available moment order {order}")]
    DegreeOverflow { degree: usize, order: usize },

    #[error("series operation requires {0}")]
    SeriesPrecondition(&'static str),

    #[error("continued fraction hit a near-zero denominator at level {level}")]
    NumericalDegeneracy { level: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("integration did not converge: estimated error {estimate:e}")]
    IntegrationFailed { estimate: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
