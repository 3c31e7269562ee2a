use thiserror::Error;

/// Errors raised by the numerical kernels.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum MctError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("cannot coarsen exactly: target level {target} is above the function level {level}")]
    CannotCoarsen { level: i32, target: i32 },
    #[error("non-dyadic dilation factor {0}; resample the function onto a dyadic grid first")]
    NonDyadicDilation(f64),
    #[error("duplicate cell index {0:?}")]
    DuplicateCell(Vec<i64>),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("negative entry {value} at index {index:?}; rearrangement needs nonnegative data")]
    NegativeEntry { index: Vec<i64>, value: f64 },
    #[error("trivial space: {0}")]
    TrivialSpace(String),
    #[error("parameters outside the admissible window: {0}")]
    OutsideWindow(String),
    #[error("condition violated at n = {witness}: {condition}")]
    ConditionViolated { condition: String, witness: i64 },
    #[error("enumeration radius {radius} too small; retry with a larger radius")]
    RadiusTooSmall { radius: usize },
    #[error("weight check failed: {0}")]
    WeightCondition(String),
    #[error("not integrable against weight: {0}")]
    NotIntegrable(String),
    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, MctError>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(MctError::InvalidArgument(msg.into()))
}
