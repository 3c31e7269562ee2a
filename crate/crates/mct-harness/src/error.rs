use mct_core::MctError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Core(#[from] MctError),
    #[error("unknown suite {name:?}; known suites: {known}")]
    UnknownSuite { name: String, known: String },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("bad weight spec {spec:?}: {reason}")]
    WeightSpec { spec: String, reason: String },
    #[error("slope fit: {0}")]
    Fit(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, HarnessError>;

pub(crate) fn config_error<T>(msg: impl Into<String>) -> Result<T> {
    Err(HarnessError::Config(msg.into()))
}
