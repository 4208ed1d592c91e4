use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("LP is unbounded")]
    Unbounded,
    #[error("iteration cap of {cap} reached ({detail})")]
    IterationCap { cap: usize, detail: String },
    #[error("certification failure: {0}")]
    Certification(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("no progress in iteration {iter}: {detail}")]
    NoProgress { iter: usize, detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn capacity(msg: impl Into<String>) -> Error {
    Error::Capacity(msg.into())
}
