use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty reference sample")]
    EmptySample,
    #[error("degenerate sample covariance")]
    DegenerateCovariance,
    #[error("sample too small: need at least {needed} points, got {got}")]
    SampleTooSmall { needed: usize, got: usize },
    #[error("correlation {0} outside [-1, 1]")]
    CorrelationOutOfRange(f64),
    #[error("argument {0} must be non-negative")]
    NegativeArgument(f64),
    #[error("non-finite value in input")]
    NonFinite,
    #[error("breaks must increase strictly from 0 to 1")]
    InvalidBreaks,
    #[error("empty reference cell {cell} has {observed} observed points")]
    EmptyReferenceCell { cell: usize, observed: usize },
    #[error("empty intensity")]
    EmptyIntensity,
    #[error("invalid intensity grid: {0}")]
    InvalidGrid(&'static str),
    #[error("shift of {shift} columns out of range for grid width {width}")]
    ShiftOutOfRange { shift: i64, width: usize },
    #[error("insufficient realization pool: {0}")]
    InsufficientPool(&'static str),
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
}
