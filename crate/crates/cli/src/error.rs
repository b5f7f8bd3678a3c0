use std::fmt;

use mqi_core::Error;

/// Exit code 2 for bad input, 1 for computations that could not finish.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Input(String),
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Failure(_) => 1,
        }
    }

    pub fn input(msg: impl Into<String>) -> CliError {
        CliError::Input(msg.into())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Failure(m) => write!(f, "computation failed: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        match e {
            Error::DegenerateInput(_)
            | Error::BadSpec(_)
            | Error::DimensionError(_)
            | Error::BadParam(_)
            | Error::BadMesh(_) => CliError::Input(e.to_string()),
            _ => CliError::Failure(e.to_string()),
        }
    }
}
