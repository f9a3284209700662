use std::path::{Path, PathBuf};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}:{line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("serialization failed: {0}")]
    Serialize(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("stage {stage}, record {record}: {source}")]
    Record {
        stage: &'static str,
        record: String,
        #[source]
        source: refsum_core::Error,
    },
    #[error("stage {stage}: {message}")]
    Stage {
        stage: &'static str,
        message: String,
    },
}

impl Error {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        Error::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn record(
        stage: &'static str,
        record: impl Into<String>,
        source: refsum_core::Error,
    ) -> Self {
        Error::Record {
            stage,
            record: record.into(),
            source,
        }
    }
}
