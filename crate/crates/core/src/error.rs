use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("embedding: {0}")]
    Embedding(String),

    #[error("ingest: {0}")]
    Ingest(String),

    #[error("alignment: {0}")]
    Alignment(String),

    #[error("models: {0}")]
    Model(String),

    #[error("metrics: {0}")]
    Metrics(String),

    #[error("pipeline: {0}")]
    Pipeline(String),

    #[error("config: {0}")]
    Config(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            message: message.into(),
        }
    }

    /// Short name of the module that raised the error.
    pub fn module(&self) -> &'static str {
        match self {
            Error::Io { .. } | Error::Parse { .. } => "io",
            Error::Embedding(_) => "embedding",
            Error::Ingest(_) => "ingest",
            Error::Alignment(_) => "alignment",
            Error::Model(_) | Error::DimensionMismatch { .. } => "models",
            Error::Metrics(_) => "metrics",
            Error::Pipeline(_) => "pipelines",
            Error::Config(_) => "config",
        }
    }
}

pub(crate) fn check_dim(expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, actual })
    }
}
