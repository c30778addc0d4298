use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("property violation: {0}")]
    Violation(String),
    #[error(transparent)]
    Numerics(#[from] ndsread::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("config: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// 0 success, 1 property violation, 2 usage error, 3 numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Violation(_) => 1,
            CliError::Usage(_) | CliError::Json(_) => 2,
            CliError::Numerics(ndsread::Error::InvalidChannel(_))
            | CliError::Numerics(ndsread::Error::InvalidDistribution(_))
            | CliError::Numerics(ndsread::Error::Domain(_)) => 2,
            CliError::Numerics(_) | CliError::Io(_) | CliError::Csv(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
