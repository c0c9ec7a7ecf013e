use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Failures of the inverse-kinematics solver. Both variants mark the
/// design/pose combination as infeasible; they are kept distinct so reports
/// can tell a stalled iteration from a degenerate configuration.
#[derive(Debug, Clone, PartialEq, Error, Serialize, Deserialize)]
#[serde(tag = "code", rename_all = "snake_case")]
pub enum SolveError {
    #[error("no convergence after {iterations} damped Newton steps (residual {residual:.3e})")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("singular loop-closure Jacobian (condition estimate {condition:.3e})")]
    SingularJacobian { condition: f64 },
}

impl SolveError {
    /// Short stable code used in sweep records and CSV output.
    pub fn code(&self) -> &'static str {
        match self {
            SolveError::NonConvergence { .. } => "non_convergence",
            SolveError::SingularJacobian { .. } => "singular_jacobian",
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("model mismatch: {0}")]
    ModelMismatch(String),
    #[error("invalid model file: {0}")]
    InvalidModel(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("design out of bounds: {name} = {value} not in [{lower}, {upper}]")]
    OutOfBounds {
        name: String,
        value: f64,
        lower: f64,
        upper: f64,
    },
    #[error("objective domain error: {0}")]
    Domain(String),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("grid has {cardinality} points, above the safety cap of {cap} (estimated {estimate_secs:.0} s); pass force to run anyway")]
    GridTooLarge {
        cardinality: u128,
        cap: u128,
        estimate_secs: f64,
    },
    #[error("checkpoint {path:?} does not match this grid (expected hash {expected}, found {found})")]
    CheckpointMismatch {
        path: PathBuf,
        expected: String,
        found: String,
    },
    #[error("config error: {0}")]
    Config(String),
    #[error("io error on {path:?}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("serialization error: {0}")]
    Serde(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
