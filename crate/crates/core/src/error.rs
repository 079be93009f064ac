use thiserror::Error;

use crate::multiindex::MultiIndex;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// A componentwise subtraction would leave a negative entry.
    #[error("domain error: {a} - {b} has a negative component")]
    NegativeComponent { a: MultiIndex, b: MultiIndex },

    #[error("missing assignment for variable {0}")]
    MissingVariable(String),

    #[error("derivative order {requested} exceeds truncation order {order}")]
    Truncation { requested: u32, order: u32 },

    #[error("series centers do not match: {0}")]
    CenterMismatch(String),

    /// A precondition of the Faà di Bruno engine was violated.
    #[error("contract violation: {0}")]
    Contract(String),

    /// A Bell polynomial coefficient came out non-integral.
    #[error("non-integral Bell coefficient {coeff} for n={n}, k={k}, assignment {assignment}")]
    NonIntegralCoefficient {
        n: MultiIndex,
        k: MultiIndex,
        assignment: String,
        coeff: String,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
