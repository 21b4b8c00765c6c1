use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Coarse failure class, used by the command-line tool to pick an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    Io,
    Validation,
    Convergence,
    Divergence,
}

impl ErrorCategory {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorCategory::Validation => 2,
            ErrorCategory::Convergence | ErrorCategory::Divergence => 3,
            ErrorCategory::Io => 4,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ErrorCategory::Io => "io",
            ErrorCategory::Validation => "validation",
            ErrorCategory::Convergence => "convergence",
            ErrorCategory::Divergence => "divergence",
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("validation error: {0}")]
    Validation(String),

    #[error("out of range: {0}")]
    OutOfRange(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("feature `{0}` is constant")]
    ConstantFeature(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("unsupported model file version {found} (expected {expected})")]
    Version { found: u32, expected: u32 },

    #[error("model checksum mismatch")]
    Checksum,

    #[error("closure did not converge at station {station} after {iterations} iterations")]
    Convergence { station: usize, iterations: usize },

    #[error("training diverged at epoch {epoch}: cost is not finite")]
    Divergence {
        epoch: usize,
        report: Box<crate::neural::TrainReport>,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub fn category(&self) -> ErrorCategory {
        match self {
            Error::Io { .. } => ErrorCategory::Io,
            Error::Convergence { .. } => ErrorCategory::Convergence,
            Error::Divergence { .. } => ErrorCategory::Divergence,
            _ => ErrorCategory::Validation,
        }
    }
}
