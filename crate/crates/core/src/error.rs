use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed instance, unknown id, or an operation applied to an
    /// instance it does not support.
    #[error("invalid input: {0}")]
    Input(String),
    /// A configured state-space cap would be exceeded.
    #[error("size limit `{cap}` exceeded: {actual} > {limit}")]
    Size {
        cap: &'static str,
        limit: u64,
        actual: u64,
    },
    #[error("trivially infeasible: {0}")]
    Infeasible(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn check_cap(cap: &'static str, limit: u64, actual: u64) -> Result<()> {
        if actual > limit {
            Err(Error::Size { cap, limit, actual })
        } else {
            Ok(())
        }
    }
}
