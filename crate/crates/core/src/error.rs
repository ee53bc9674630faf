use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("rank error: {0}")]
    Rank(String),
    #[error("range error: {0}")]
    Range(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid Tietze move: {0}")]
    Move(String),
    #[error("protocol setup failed: {0}")]
    Setup(String),
    #[error("sampling failed: {0}")]
    Sampling(String),
    #[error("key generation failed: {0}")]
    Keygen(String),
    #[error("length target unreachable: {0}")]
    Length(String),
    #[error("enumeration bound exceeded: {0}")]
    Bound(String),
    #[error("attack failed: {0}")]
    AttackFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
