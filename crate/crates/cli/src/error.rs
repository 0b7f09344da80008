use std::path::PathBuf;

use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: u8 = 0;
    pub const MISMATCH: u8 = 1;
    pub const BAD_INPUT: u8 = 2;
    pub const DIMENSION: u8 = 3;
    pub const OPTIMIZER: u8 = 4;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("{0}")]
    Optimizer(String),
    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("malformed scenario: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Dimension(_) => exit::DIMENSION,
            CliError::Optimizer(_) => exit::OPTIMIZER,
            _ => exit::BAD_INPUT,
        }
    }
}

impl From<entropic_core::Error> for CliError {
    fn from(e: entropic_core::Error) -> Self {
        use entropic_core::Error as E;
        match e {
            E::DimensionMismatch(..) | E::DimensionOutOfRange(..) => CliError::Dimension(e.to_string()),
            E::OptimizerFailure | E::NonFiniteObjective => CliError::Optimizer(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
