use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("index {index} out of range for {len} basis functions")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("parameter {t} outside curve domain [{lo}, {hi}]")]
    OutOfDomain { t: f64, lo: f64, hi: f64 },

    #[error("rank-deficient least-squares system (rank {rank}, need {needed})")]
    RankDeficient { rank: usize, needed: usize },

    #[error("design variable {index} = {value} outside [{lo}, {hi}]")]
    BoundViolation { index: usize, value: f64, lo: f64, hi: f64 },

    #[error("roof and floor cross at station {station} (t = {t})")]
    RoofFloorCrossing { station: usize, t: f64 },

    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("training diverged at epoch {epoch}: loss is {loss}")]
    Diverged { epoch: usize, loss: f64 },

    #[error("shape mismatch: expected {expected}, got {got}")]
    Shape { expected: usize, got: usize },

    #[error("{}:{line}: {msg}", path.display())]
    Parse { path: PathBuf, line: usize, msg: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { path: path.into(), line, msg: msg.into() }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    /// Coarse classification used by front ends to pick an exit status.
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::InvalidArgument(_) | Error::IndexOutOfRange { .. } | Error::OutOfDomain { .. } => {
                ErrorKind::Usage
            }
            Error::BoundViolation { .. }
            | Error::Parse { .. }
            | Error::Io { .. }
            | Error::Shape { .. }
            | Error::RoofFloorCrossing { .. } => ErrorKind::Data,
            Error::RankDeficient { .. }
            | Error::DegenerateGeometry(_)
            | Error::Numerical(_)
            | Error::Diverged { .. } => ErrorKind::Numerical,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Usage,
    Data,
    Numerical,
}
