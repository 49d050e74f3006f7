use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{path}: line {line}: {message}")]
    Parse {
        path: String,
        line: u64,
        message: String,
    },

    #[error("{0}")]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Model(#[from] ltfrechet::Error),

    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    /// 2 for usage, input and infeasibility problems; 3 for numerical failure.
    pub fn exit_code(&self) -> i32 {
        use ltfrechet::Error as E;
        match self {
            CliError::Usage(_) | CliError::Parse { .. } | CliError::Io(_) => 2,
            CliError::Model(E::NonFiniteObjective | E::NotPositiveDefinite) => 3,
            CliError::Model(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
