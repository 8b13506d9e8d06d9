use thiserror::Error;

use crate::io::ParseError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid options: {0}")]
    InvalidOptions(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Neither the diagonal entry nor the diagonal plus last-row entry is usable.
    #[error("no usable pivot in column {column}")]
    PivotBreakdown { column: usize },

    #[error("numerical breakdown: {0}")]
    NumericalBreakdown(String),

    #[error("k + n = {size} exceeds the enumeration limit {limit}")]
    CombinatorialLimit { size: usize, limit: usize },

    #[error("unknown example id {0} (expected 1..=5)")]
    UnknownExample(u32),

    #[error(transparent)]
    Parse(#[from] ParseError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
