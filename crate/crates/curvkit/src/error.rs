use std::path::PathBuf;

/// Everything that maps to exit status 2.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("manifest line {line}: {message}")]
    Manifest { line: usize, message: String },

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] curvkit_core::Error),
}

impl CliError {
    pub(crate) fn manifest(line: usize, message: impl Into<String>) -> Self {
        CliError::Manifest {
            line,
            message: message.into(),
        }
    }
}

impl From<curvkit_core::ExprError> for CliError {
    fn from(e: curvkit_core::ExprError) -> Self {
        CliError::Core(e.into())
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
