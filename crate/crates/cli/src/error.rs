use std::io;

/// Failures surfaced by the command-line driver, each mapped to an exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{origin}{}: {message}", line.map(|l| format!(":{l}")).unwrap_or_default())]
    Parse { origin: String, line: Option<usize>, message: String },
    #[error("{path}: {error}")]
    Io { path: String, error: io::Error },
    #[error("{context}: {error}")]
    Invalid { context: String, error: qbm_core::Error },
    #[error("{0}")]
    Usage(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn invalid_input(context: &str, error: qbm_core::Error) -> Self {
        Self::Invalid { context: context.to_string(), error }
    }

    /// 1 for anything attributable to the inputs, 2 for failures of the tool itself.
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Parse { .. } | Self::Io { .. } | Self::Usage(_) => 1,
            Self::Invalid { error, .. } => match error {
                qbm_core::Error::NonFiniteGradient => 2,
                _ => 1,
            },
            Self::Internal(_) => 2,
        }
    }
}
