use std::fmt;

use anyonsim::Error;

/// Process exit codes.
pub mod code {
    pub const PARSE: i32 = 2;
    pub const ENGINE: i32 = 3;
    pub const PRECONDITION: i32 = 4;
    pub const INVARIANT: i32 = 5;
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn parse(message: impl Into<String>) -> Self {
        Self { code: code::PARSE, message: message.into() }
    }

    pub fn precondition(message: impl Into<String>) -> Self {
        Self { code: code::PRECONDITION, message: message.into() }
    }

    pub fn invariant(message: impl Into<String>) -> Self {
        Self { code: code::INVARIANT, message: message.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::OutOfFamily { .. } | Error::UnknownEngine(_) => code::ENGINE,
            Error::IndefiniteParticleNumber
            | Error::WrongParticleNumber { .. }
            | Error::ZeroState
            | Error::PhiMismatch { .. }
            | Error::ModeCountMismatch(..) => code::PRECONDITION,
            Error::NotHermitian(_) | Error::InvalidDensityMatrix(_) | Error::InvalidBogoliubov(_) => code::INVARIANT,
            _ => code::PARSE,
        };
        Self { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::parse(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
