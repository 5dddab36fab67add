use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("signature error: {0}")]
    Signature(String),
    #[error("theory error: {0}")]
    Theory(String),
    #[error("system error: {0}")]
    System(String),
    #[error("invalid derivation at node {node}: {msg}")]
    Check { node: String, msg: String },
    #[error("composition error: {0}")]
    Compose(String),
    #[error("no match: {0}")]
    NoMatch(String),
    #[error("configuration error: {0}")]
    Config(String),
}

impl Error {
    pub fn parse(line: usize, col: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, col, msg: msg.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
