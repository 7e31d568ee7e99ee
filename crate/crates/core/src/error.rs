use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation (bad prime,
    /// degenerate element, mismatched lengths, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// A configured memory or time budget would be exceeded.
    #[error("resource limit: {0}")]
    Resource(String),
    /// Pollard-rho ran out of iterations before splitting a composite.
    #[error("factoring budget exhausted on {0}")]
    FactoringBudget(String),
    /// Malformed textual input (curves, points, elements).
    #[error("parse error: {0}")]
    Parse(String),
    /// A consistency check between two independent computations failed.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
