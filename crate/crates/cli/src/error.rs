use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),

    #[error("io: {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{stage}: {source}")]
    Core {
        stage: &'static str,
        #[source]
        source: qprot_core::Error,
    },

    #[error("protection report incomplete: {}", .0.join("; "))]
    Incomplete(Vec<String>),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    /// Process exit status: 1 usage or config, 2 IO, 3 incomplete report,
    /// 4 numeric failure.
    pub fn exit_code(&self) -> i32 {
        use qprot_core::Error as E;
        match self {
            CliError::Config(_) => 1,
            CliError::Io { .. } => 2,
            CliError::Incomplete(_) => 3,
            CliError::Core { source, .. } => match source {
                E::InvalidArgument(_) | E::UnsupportedResonance { .. } | E::NoSeparatrix(_) => 1,
                E::InsufficientData { .. } | E::NumericFailure { .. } | E::ResolutionFailure { .. } => 4,
            },
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Tags core errors with the pipeline stage that raised them.
pub(crate) trait Stage<T> {
    fn stage(self, stage: &'static str) -> Result<T>;
}

impl<T> Stage<T> for qprot_core::Result<T> {
    fn stage(self, stage: &'static str) -> Result<T> {
        self.map_err(|source| CliError::Core { stage, source })
    }
}
