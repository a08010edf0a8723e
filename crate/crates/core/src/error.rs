use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("unknown configuration key `{0}`")]
    UnknownKey(String),

    #[error("unknown problem `{name}` (registered: {})", known.join(", "))]
    UnknownProblem { name: String, known: Vec<String> },

    #[error("unknown preset `{name}` (available: {})", known.join(", "))]
    UnknownPreset { name: String, known: Vec<String> },

    #[error("hypervolume is only supported for 2 or 3 objectives, got {0}")]
    UnsupportedObjectives(usize),

    #[error("failed to parse configuration: {0}")]
    Parse(#[from] toml::de::Error),

    #[error("failed to serialize configuration: {0}")]
    Serialize(#[from] toml::ser::Error),

    #[error("I/O error at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by bad user input rather than the environment.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::InvalidConfig(_)
                | Error::UnknownKey(_)
                | Error::UnknownProblem { .. }
                | Error::UnknownPreset { .. }
                | Error::Parse(_)
                | Error::UnsupportedObjectives(_)
        )
    }
}

pub(crate) fn check_len(context: &'static str, expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            context,
            expected,
            got,
        })
    }
}
