use mmtv_core::lp::LpError;
use mmtv_core::Error as CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("JSON syntax error: {0}")]
    Syntax(String),
    #[error("schema error at `{path}`: {message}")]
    Schema { path: String, message: String },
    #[error("invalid input at `{path}`: {message}")]
    Validation { path: String, message: String },
    #[error("hypothesis at `{path}` is empty")]
    Empty { path: String },
    #[error(transparent)]
    Core(#[from] CoreError),
}

impl CliError {
    /// 0 success, 1 input or schema error, 2 infeasible or empty hypothesis,
    /// 3 numeric failure.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_)
            | CliError::Io { .. }
            | CliError::Syntax(_)
            | CliError::Schema { .. }
            | CliError::Validation { .. } => 1,
            CliError::Empty { .. } => 2,
            CliError::Core(e) => core_exit_code(e),
        }
    }
}

fn core_exit_code(e: &CoreError) -> u8 {
    match e {
        CoreError::EmptyHypothesis | CoreError::EmptyFamily | CoreError::NoPoweredEVariable => 2,
        CoreError::Lp(LpError::NumericBreakdown(_) | LpError::MaxIterationsExceeded(_))
        | CoreError::UnexpectedLpStatus(_)
        | CoreError::DualityGapExceeded { .. } => 3,
        CoreError::Lp(LpError::Malformed(_))
        | CoreError::DimensionMismatch { .. }
        | CoreError::SpaceMismatch
        | CoreError::InvalidSpace(_)
        | CoreError::InvalidPmf(_)
        | CoreError::InvalidWeights(_)
        | CoreError::InvalidTest(_)
        | CoreError::InvalidSubProbability(_)
        | CoreError::InvalidEVariable(_)
        | CoreError::InvalidGenerator { .. }
        | CoreError::InvalidConstraint { .. }
        | CoreError::MissingValues
        | CoreError::InvalidPairing(_)
        | CoreError::RadiusOutOfRange(_)
        | CoreError::InvalidCapSchedule(_)
        | CoreError::UnknownExample(_)
        | CoreError::InvalidParams(_) => 1,
    }
}
