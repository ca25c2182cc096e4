use std::path::PathBuf;

/// Failures surfaced by the runner and the command line.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad input: malformed config, spec or parameter. Exit code 2.
    #[error("invalid input: {0}")]
    Validation(String),
    /// A library call failed at a parameter point. Exit code 1.
    #[error("{context}: {source}")]
    Core {
        context: String,
        #[source]
        source: dqc1_core::Error,
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Format(String),
    /// A verification run found a violated property. Exit code 1.
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Core { source, .. } if is_validation(source) => 2,
            _ => 1,
        }
    }

    pub fn core(context: impl Into<String>, source: dqc1_core::Error) -> Self {
        CliError::Core {
            context: context.into(),
            source,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

fn is_validation(e: &dqc1_core::Error) -> bool {
    use dqc1_core::Error::*;
    matches!(
        e,
        NotSquare { .. }
            | DimensionMismatch { .. }
            | DimensionTooLarge { .. }
            | NonFinite
            | NotHermitian { .. }
            | NotUnitary { .. }
            | NotDensity { .. }
            | NotNormalized { .. }
            | InvalidParameter { .. }
            | InvalidSpec(_)
    )
}

pub type Result<T> = std::result::Result<T, CliError>;
