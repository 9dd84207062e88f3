use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} coordinates, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid surface: {0}")]
    InvalidSurface(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("rank must be positive, got {0}")]
    NonPositiveRank(i64),

    #[error("class is not numerically exceptional: chi(e0, e0) = {0}")]
    NotExceptional(i64),

    #[error("twisted degree must be 1, got {0}")]
    DegreeNotOne(i64),

    #[error("missing polynomial for index k = {0}")]
    MissingValue(i64),

    #[error("polynomial division is not exact")]
    InexactDivision,

    #[error("negative coefficient {0} where a Betti-type polynomial is required")]
    NegativeCoefficient(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{0}")]
    Io(String),

    #[error("base case `{label}`: {reason}")]
    BaseCase { label: String, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
