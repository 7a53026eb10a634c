use thiserror::Error;

use crate::lp::LpError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("objects live on different sample spaces")]
    SpaceMismatch,
    #[error("invalid sample space: {0}")]
    InvalidSpace(String),
    #[error("invalid pmf: {0}")]
    InvalidPmf(String),
    #[error("invalid mixture weights: {0}")]
    InvalidWeights(String),
    #[error("invalid test function: {0}")]
    InvalidTest(String),
    #[error("invalid sub-probability: {0}")]
    InvalidSubProbability(String),
    #[error("invalid e-variable: {0}")]
    InvalidEVariable(String),
    #[error("empty family")]
    EmptyFamily,
    #[error("hypothesis set is empty")]
    EmptyHypothesis,
    #[error("invalid generator #{index}: {reason}")]
    InvalidGenerator { index: usize, reason: String },
    #[error("invalid constraint #{index}: {reason}")]
    InvalidConstraint { index: usize, reason: String },
    #[error("sample space has no numeric embedding values")]
    MissingValues,
    #[error("invalid pairing: {0}")]
    InvalidPairing(String),
    #[error("radius {0} outside [0, 1]")]
    RadiusOutOfRange(String),
    #[error("invalid cap schedule: {0}")]
    InvalidCapSchedule(String),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("internal LP unexpectedly {0}")]
    UnexpectedLpStatus(&'static str),
    #[error("duality gap {gap} exceeds tolerance {tolerance}")]
    DualityGapExceeded { gap: String, tolerance: String },
    #[error("hulls are not TV-separated; no uniformly powered bounded e-variable exists")]
    NoPoweredEVariable,
    #[error("unknown example `{0}`")]
    UnknownExample(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
