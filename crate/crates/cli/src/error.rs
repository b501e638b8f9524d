use thiserror::Error;

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_NONCONVERGENCE: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Numeric(#[from] telefid::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io { .. } | CliError::Csv(_) => EXIT_IO,
            CliError::Numeric(e) => match e {
                telefid::Error::InvalidParameter(_) | telefid::Error::PhaseNotSpecialized(_) => EXIT_USAGE,
                telefid::Error::NonConvergence { .. } | telefid::Error::Degenerate(_) => EXIT_NONCONVERGENCE,
            },
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
