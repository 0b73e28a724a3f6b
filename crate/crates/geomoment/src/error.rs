use std::fmt;

use geomoment_core::Error as CoreError;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const VERIFICATION_FAILED: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const PARSE: i32 = 3;
    pub const DOMAIN: i32 = 4;
}

/// Where in an input file a problem was found.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Location {
    pub line: Option<u64>,
    pub byte: Option<u64>,
    /// Data row, 1-based, not counting the header.
    pub row: Option<u64>,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if let Some(r) = self.row {
            parts.push(format!("row {r}"));
        }
        if let Some(l) = self.line {
            parts.push(format!("line {l}"));
        }
        if let Some(b) = self.byte {
            parts.push(format!("byte {b}"));
        }
        f.write_str(&parts.join(", "))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {location}: {message}")]
    Parse { path: String, location: Location, message: String },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] CoreError),
}

impl AppError {
    pub fn parse(path: impl Into<String>, location: Location, message: impl Into<String>) -> Self {
        AppError::Parse { path: path.into(), location, message: message.into() }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Usage(_) => exit::USAGE,
            AppError::Parse { .. } | AppError::Io { .. } => exit::PARSE,
            AppError::Core(e) => match e {
                CoreError::Parse { .. } | CoreError::InvalidGrid(_) | CoreError::InvalidTemplate(_) => exit::PARSE,
                CoreError::UnsupportedGenerationOrder(_)
                | CoreError::OrderOutOfRange(_)
                | CoreError::InvalidOrderSet(_)
                | CoreError::OddOrder(_)
                | CoreError::MaxOrderTooSmall(_)
                | CoreError::UnknownTemplate(_) => exit::USAGE,
                CoreError::InternalConsistency(_) => exit::VERIFICATION_FAILED,
                _ => exit::DOMAIN,
            },
        }
    }
}

pub type Result<T, E = AppError> = std::result::Result<T, E>;
