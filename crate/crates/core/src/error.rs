use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Input outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    #[error("contact (0)-surgery is not well-defined")]
    ContactZero,
    #[error("c1^2 undefined: non-torsion Euler class (singular intersection form)")]
    Singular,
    #[error("malformed Farey path: {0}")]
    MalformedPath(String),
    #[error("parse error: {0}")]
    Parse(String),
    /// Two independent computations disagreed. Always a bug.
    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
