use std::fmt;
use std::process::ExitCode;

use serde_json::json;

/// Everything that ends a command early, tagged with its exit code.
#[derive(Debug)]
pub enum CliError {
    /// Exit 1: the command ran but a checked property failed.
    CheckFailed(String),
    /// Exit 2: invalid flags, values or input documents.
    Config(String),
    /// Exit 3: the mathematics refused (singular shear, mixed parameters, ...).
    Math(qshear_core::Error),
    /// Exit 4: reading or writing files.
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::CheckFailed(_) => 1,
            CliError::Config(_) => 2,
            CliError::Math(_) => 3,
            CliError::Io(_) => 4,
        }
    }

    fn kind(&self) -> &str {
        match self {
            CliError::CheckFailed(_) => "CheckFailed",
            CliError::Config(_) => "ConfigError",
            CliError::Math(e) => e.kind(),
            CliError::Io(_) => "IoError",
        }
    }

    /// Machine-readable error document for stderr.
    pub fn to_json(&self) -> String {
        json!({
            "error": {
                "kind": self.kind(),
                "message": self.to_string(),
                "exit_code": self.exit_code(),
            }
        })
        .to_string()
    }

    pub fn report(&self) -> ExitCode {
        eprintln!("{}", self.to_json());
        ExitCode::from(self.exit_code())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::CheckFailed(check) => write!(f, "check `{check}` failed"),
            CliError::Config(msg) | CliError::Io(msg) => f.write_str(msg),
            CliError::Math(e) => write!(f, "{e}"),
        }
    }
}

impl From<qshear_core::Error> for CliError {
    fn from(e: qshear_core::Error) -> Self {
        use qshear_core::Error as E;
        match e {
            E::InvalidQ(_) | E::UnknownPreset(_) | E::WeightError(_) | E::InvalidGrid(_) => {
                CliError::Config(e.to_string())
            }
            other => CliError::Math(other),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
