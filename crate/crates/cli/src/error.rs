use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("I/O: {0}")]
    Io(String),
    #[error("numeric abort: {0}")]
    Numeric(String),
    #[error(transparent)]
    Solver(#[from] ansps::Error),
}

impl CliError {
    /// 0 success, 1 usage error, 2 I/O error, 3 numeric abort.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Solver(e) => match e {
                ansps::Error::Io(_) | ansps::Error::Parse { .. } | ansps::Error::EmptyDataset => 2,
                ansps::Error::NonFinite(_) => 3,
                _ => 1,
            },
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
