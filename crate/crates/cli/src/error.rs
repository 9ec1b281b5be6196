//! Runner errors, split by exit code: configuration problems (including
//! unusable paths) exit with 2, numeric failures from the library exit
//! with 3.

use std::process::ExitCode;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Config(_) => ExitCode::from(2),
            CliError::Numeric(_) => ExitCode::from(3),
        }
    }
}

impl From<rpzeros::Error> for CliError {
    fn from(err: rpzeros::Error) -> Self {
        CliError::Numeric(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Shorthand for configuration failures built from format strings.
pub fn config_error<S: Into<String>>(message: S) -> CliError {
    CliError::Config(message.into())
}
