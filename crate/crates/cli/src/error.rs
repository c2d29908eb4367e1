use kdv_core::ring::{ParseError, RingError};
use kdv_core::{CalculusError, Error};

/// Process exit status. The numbering is part of the CLI contract.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitCode {
    Pass = 0,
    Usage = 1,
    Parse = 2,
    Precondition = 3,
    IdentityFailure = 4,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot parse `{text}`: {source}")]
    Expression { text: String, source: ParseError },
    #[error("config: {0}")]
    Config(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0} check(s) failed")]
    ChecksFailed(usize),
}

impl From<RingError> for CliError {
    fn from(e: RingError) -> CliError {
        CliError::Core(e.into())
    }
}

impl From<CalculusError> for CliError {
    fn from(e: CalculusError) -> CliError {
        CliError::Core(e.into())
    }
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) | CliError::Io(_) => ExitCode::Usage,
            CliError::Expression { .. } | CliError::Config(_) => ExitCode::Parse,
            CliError::ChecksFailed(_) => ExitCode::IdentityFailure,
            CliError::Core(e) => core_exit_code(e),
        }
    }
}

/// Broken identities map to 4, unmet preconditions to 3.
fn core_exit_code(e: &Error) -> ExitCode {
    match e {
        Error::IdentityFailure(_)
        | Error::CrossCheckFailure(_)
        | Error::PdeViolation(_)
        | Error::FormMismatch(_)
        | Error::HomogeneityFailure(_)
        | Error::DegreeViolation(_)
        | Error::Ring(RingError::InexactDivision) => ExitCode::IdentityFailure,
        _ => ExitCode::Precondition,
    }
}

pub type CliResult<T> = Result<T, CliError>;
