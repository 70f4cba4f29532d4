use thiserror::Error;

/// Errors raised by constructions, estimators, and searches.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// The generators admit no common point within distance r.
    #[error("infeasible: {0}")]
    Infeasible(String),
    /// An iterative routine hit its iteration cap before certifying its answer.
    #[error("no convergence: {0}")]
    NoConvergence(String),
    /// The Steiner least-squares system is too poorly conditioned to trust.
    #[error("ill-conditioned fit: {0}")]
    IllConditioned(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
