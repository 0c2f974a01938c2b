use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] qwhydro_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit status: 2 for configuration problems, 3 for numerical
    /// consistency failures, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        use qwhydro_core::Error as E;
        match self {
            CliError::Config(_) => 2,
            CliError::Core(E::Config(_) | E::Usage(_) | E::ModeIndex { .. } | E::GridMismatch(..)) => 2,
            CliError::Core(E::Consistency(_) | E::Degenerate(_)) => 3,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

#[cfg(test)]
mod tests {
    use super::*;
    use qwhydro_core::Error as E;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Config("x".into()).exit_code(), 2);
        assert_eq!(CliError::from(E::Usage("x".into())).exit_code(), 2);
        assert_eq!(CliError::from(E::GridMismatch(1, 2)).exit_code(), 2);
        assert_eq!(CliError::from(E::Consistency("x".into())).exit_code(), 3);
        assert_eq!(CliError::from(E::Degenerate("x".into())).exit_code(), 3);
        let io = std::io::Error::new(std::io::ErrorKind::NotFound, "gone");
        assert_eq!(CliError::io("/a", io).exit_code(), 1);
    }
}
