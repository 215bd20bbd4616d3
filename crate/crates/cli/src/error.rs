use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("config line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Numerical(#[from] cs_green::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{0} reference values not reproduced")]
    Mismatch(usize),
}

impl CliError {
    /// 1 for usage, parse, and bad-input errors, 2 for numerical failures,
    /// 3 for a reference mismatch.
    pub fn exit_code(&self) -> i32 {
        use cs_green::Error as E;
        match self {
            CliError::Usage(_) | CliError::Parse { .. } | CliError::Io { .. } => 1,
            CliError::Numerical(
                E::InvalidBasis(_)
                | E::InvalidPotential(_)
                | E::NotConfining
                | E::NegativeRadius(_)
                | E::UnsupportedPower(_)
                | E::Partition { .. }
                | E::InvalidArgument(_),
            ) => 1,
            CliError::Numerical(_) => 2,
            CliError::Mismatch(_) => 3,
        }
    }
}
