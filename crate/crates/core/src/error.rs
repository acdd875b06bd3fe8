use thiserror::Error;

use crate::bitlin::BitlinError;
use crate::channel::ChannelError;

/// Crate-wide error.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Bitlin(#[from] BitlinError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid code: {0}")]
    InvalidCode(String),
    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("position {position} is not locally repairable")]
    NotRepairable { position: usize },
    #[error("repair query position {0} is erased")]
    QueryErased(usize),
    #[error("could not sample a full-rank parity-check matrix after {attempts} attempts")]
    SamplingFailed { attempts: usize },
    #[error("received word does not match any codeword")]
    InconsistentWord,
    #[error("code file: {0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
