use std::fmt;

/// Failure of a CLI run, with its process exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Library(wigmom::Error),
    Io(std::io::Error),
    /// The randomized property check found a counterexample.
    PropertyViolated(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use wigmom::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Library(e) => match e {
                E::InvalidArgument(_) | E::InvalidState(_) | E::Unsupported(_) | E::Parse(_) => 2,
                E::CutoffTooSmall { .. } | E::DegenerateCovariance(_) | E::Truncation { .. } => 3,
                E::SizeLimit { .. } => 4,
            },
            CliError::Io(_) | CliError::PropertyViolated(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Library(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
            CliError::PropertyViolated(m) => write!(f, "property violated: {m}"),
        }
    }
}

impl From<wigmom::Error> for CliError {
    fn from(e: wigmom::Error) -> Self {
        CliError::Library(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}
