use std::fmt;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A one-line notation string could not be parsed.
    #[error("invalid permutation at token {position} ({token:?}): {reason}")]
    Parse {
        token: String,
        /// 1-based index of the offending token.
        position: usize,
        reason: String,
    },

    #[error("not a permutation: {0}")]
    NotAPermutation(String),

    #[error("order {requested} exceeds the enumeration cap of {cap}")]
    SizeLimit { requested: usize, cap: usize },

    #[error("contract violation: {0}")]
    Contract(String),

    /// Permuton description is malformed; `path` locates the offending node.
    #[error("invalid permuton at {path}: {reason}")]
    Permuton { path: String, reason: String },

    #[error("invalid rational {0:?}")]
    Rational(String),

    #[error("search failed: {0}")]
    SearchFailed(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn contract(msg: impl fmt::Display) -> Self {
        Error::Contract(msg.to_string())
    }

    pub(crate) fn permuton(path: &str, reason: impl fmt::Display) -> Self {
        Error::Permuton {
            path: path.to_string(),
            reason: reason.to_string(),
        }
    }
}
