use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the estimation pipeline.
///
/// Variants are grouped by how a caller should react: configuration problems
/// are user-fixable, numerical failures indicate a degenerate model or data
/// set, and I/O failures cover the filesystem and file-format layer. The CLI
/// maps each group to a distinct process exit code.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid configuration, inconsistent dimensions, or rejected input values.
    #[error("config error: {0}")]
    Config(String),

    /// Several configuration problems reported together so the user can fix
    /// them in one pass.
    #[error("config errors:\n  - {}", .0.join("\n  - "))]
    ConfigList(Vec<String>),

    /// Numerical breakdown: failed factorization, non-finite values, unstable
    /// or rank-deficient systems.
    #[error("numerical error: {0}")]
    Numerical(String),

    /// Filesystem, CSV, or serialization trouble.
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }

    pub fn io(msg: impl Into<String>) -> Self {
        Error::Io(msg.into())
    }

    /// Process exit code for the CLI: 2 for configuration problems, 3 for
    /// numerical failures, 4 for I/O failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::ConfigList(_) => 2,
            Error::Numerical(_) => 3,
            Error::Io(_) => 4,
        }
    }

    /// Short machine-readable category label used in error JSON output.
    pub fn category(&self) -> &'static str {
        match self {
            Error::Config(_) | Error::ConfigList(_) => "config",
            Error::Numerical(_) => "numerical",
            Error::Io(_) => "io",
        }
    }

    /// Prefix the message with failure context while keeping the variant,
    /// so exit codes and categories survive the annotation.
    pub fn with_prefix(self, prefix: &str) -> Self {
        match self {
            Error::Config(s) => Error::Config(format!("{prefix}: {s}")),
            Error::ConfigList(v) => {
                Error::ConfigList(v.into_iter().map(|s| format!("{prefix}: {s}")).collect())
            }
            Error::Numerical(s) => Error::Numerical(format!("{prefix}: {s}")),
            Error::Io(s) => Error::Io(format!("{prefix}: {s}")),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
