use thiserror::Error;

/// Errors produced by the simulation and verification engines.
#[derive(Debug, Error)]
pub enum Error {
    /// An input lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested work exceeds the configured budget of elementary tests.
    #[error("budget exceeded: the request needs {needed} elementary tests but the budget is {budget}")]
    Budget { needed: u128, budget: u128 },

    /// A textual specification (ψ family, point spec, ...) could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

/// Refuses with [`Error::Budget`] when `needed` exceeds `budget`.
pub fn check_budget(needed: u128, budget: u128) -> Result<()> {
    if needed > budget {
        Err(Error::Budget { needed, budget })
    } else {
        Ok(())
    }
}
