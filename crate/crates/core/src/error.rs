use thiserror::Error;

use crate::ordinal::Ordinal;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    /// Exponents of the Cantor normal form must be naturals.
    #[error("ordinal exceeds the supported range (< w^w): {0}")]
    OrdinalCap(String),

    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    #[error("invalid alpha: {0}")]
    InvalidAlpha(String),

    #[error("invalid index sequence: {0}")]
    InvalidSequence(String),

    #[error("invalid vertex: {0}")]
    InvalidVertex(String),

    #[error("invalid key: {0}")]
    InvalidKey(String),

    #[error("invalid weight scheme: {0}")]
    InvalidScheme(String),

    #[error("invalid box: {0}")]
    InvalidBox(String),

    #[error("vertex {0} has height 0 and no children")]
    Leaf(String),

    #[error("{divisor} does not divide {dividend}")]
    NotDivisible { divisor: String, dividend: String },

    #[error("key height {height} is below stage {stage}")]
    StageMismatch { height: Ordinal, stage: Ordinal },

    #[error("computation budget exceeded: {0}")]
    Budget(String),

    #[error("{0}")]
    Config(String),
}

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }
}
