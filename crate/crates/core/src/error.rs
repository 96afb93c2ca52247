use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cycle: relations imply {0} < {0}")]
    Cycle(usize),
    #[error("point {index} out of range for n = {n}")]
    Index { index: usize, n: usize },
    #[error("out of range: {0}")]
    Range(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("no convergence: {0}")]
    Convergence(String),
    #[error("degenerate interval: {0}")]
    Degenerate(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
