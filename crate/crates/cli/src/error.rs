use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] entry7::Error),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 64,
            CliError::Core(e) if is_usage(e) => 64,
            _ => 1,
        }
    }
}

/// Core errors that stem from bad user input rather than a failed computation.
pub fn is_usage(e: &entry7::Error) -> bool {
    use entry7::Error::*;
    matches!(
        e,
        InvalidPrecision(_) | Domain(_) | SingularParameter(_) | Parse(_) | InvalidArgument(_)
    )
}

pub type CliResult<T> = Result<T, CliError>;
