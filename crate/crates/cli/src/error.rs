use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags or configuration; exit code 2.
    #[error("usage: {0}")]
    Usage(String),

    /// Numerical or domain error from the library; exit code 1.
    #[error(transparent)]
    Numeric(#[from] dfp_lattice::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    /// Some verification check missed its tolerance; exit code 1.
    #[error("{0} verification check(s) failed")]
    Failed(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
