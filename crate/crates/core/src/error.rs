use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown landscape `{0}` (known: quad2, doublewell, fig1_min, fig1_monkey, diag_quadratic(l1,..,lP))")]
    UnknownLandscape(String),

    #[error("unknown algorithm `{0}` (known: {1})")]
    UnknownAlgorithm(String, String),

    #[error("not a critical point: gradient norm {norm:e} exceeds tolerance {tol:e}")]
    NotCritical { norm: f64, tol: f64 },

    #[error("real regime, no spiral frequency (discriminant {discriminant} >= 0)")]
    RealRegime { discriminant: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("{context}: {source}")]
    Json {
        context: String,
        #[source]
        source: serde_json::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
