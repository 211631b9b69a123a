use std::fmt;

/// CLI failure with its documented exit code: 2 flag/config errors,
/// 3 divergence, 4 metric preconditions, 1 anything else.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Diverged(String),
    Metric(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Diverged(_) => 3,
            CliError::Metric(_) => 4,
            CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Diverged(m) | CliError::Metric(m) | CliError::Io(m) => {
                write!(f, "{m}")
            }
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

/// Maps a failed run to its exit class, labeling the offending combo.
pub fn run_error(label: &str, err: tiltstream_core::Error) -> CliError {
    use tiltstream_core::Error;
    match err {
        Error::Diverged { iteration } => {
            CliError::Diverged(format!("run {label} diverged at iteration {iteration}"))
        }
        Error::SingleClassEval => {
            CliError::Metric(format!("run {label}: {}", Error::SingleClassEval))
        }
        other => CliError::Usage(format!("run {label}: {other}")),
    }
}
