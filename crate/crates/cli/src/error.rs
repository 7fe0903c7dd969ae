use std::fmt;

use enerinvest::ErrorKind;

/// Failure of a subcommand, carrying the process exit code it maps to.
#[derive(Debug)]
pub enum CliError {
    /// Unreadable or invalid input. Exit code 2.
    Input(String),
    /// Well-formed input for which the computation is undefined. Exit code 3.
    Compute(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Compute(_) => 3,
        }
    }

    pub fn input(message: impl Into<String>) -> Self {
        CliError::Input(message.into())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Compute(m) => write!(f, "computation error: {m}"),
        }
    }
}

impl<E: Into<enerinvest::Error>> From<E> for CliError {
    fn from(e: E) -> Self {
        let e = e.into();
        match e.kind() {
            ErrorKind::Input => CliError::Input(e.to_string()),
            ErrorKind::Computation => CliError::Compute(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
