//! Benchmark harness around `albench-core`: dataset/record IO, the
//! experiment engine with its retention policy and worker pool, table
//! rendering, and run-configuration plumbing shared by the `albench`
//! binary and the test suite.

pub mod config;
pub mod csvout;
pub mod engine;
pub mod io;

/// Errors mapped onto the binary's exit codes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    /// Bad invocation (unknown strategy, malformed flag value) -> exit 2.
    Usage(String),
    /// Unreadable or mismatching dataset -> exit 3.
    Data(String),
    /// Mixed run manifests in one analysis -> exit 4.
    Mixed(String),
    /// Everything else -> exit 1.
    Other(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Data(_) => 3,
            CliError::Mixed(_) => 4,
            CliError::Other(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::Mixed(m) | CliError::Other(m) => m,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.message())
    }
}

impl std::error::Error for CliError {}
