use std::path::PathBuf;

use qldp_core::QldpError;

use crate::format::FormatError;
use crate::spec::SpecError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("noise spec: {0}")]
    Spec(#[from] SpecError),
    #[error("{0}")]
    Usage(String),
    /// A library error caused by a bad argument rather than the computation.
    #[error("invalid argument: {0}")]
    Argument(QldpError),
    #[error("computation failed: {0}")]
    Compute(#[from] QldpError),
    #[error("cannot write {path}: {source}")]
    Output {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Format(_) | CliError::Spec(_) | CliError::Usage(_) | CliError::Argument(_) => 2,
            CliError::Compute(_) => 3,
            CliError::Output { .. } => 4,
        }
    }
}
