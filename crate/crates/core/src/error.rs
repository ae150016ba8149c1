use core::fmt;

/// Errors surfaced by the core algorithms.
///
/// `ColdStart` is a control-flow signal rather than a defect: it tells the
/// engine that a random initial pool contained a single class so the whole
/// trial must be abandoned (not resampled in place).
#[derive(Debug, Clone, PartialEq)]
pub enum CoreError {
    /// The initial labeled pool holds one class only; the trial is void.
    ColdStart,
    /// The labels do not form a two-class problem.
    NotBinary,
    /// Malformed sparse-format input. `line` and `column` are 1-based.
    Parse {
        line: usize,
        column: usize,
        what: &'static str,
    },
    /// A numeric routine left its domain (non-finite input, a kernel that
    /// could not be shifted to positive definite, ...). `value` carries the
    /// offending quantity, e.g. the best eigenvalue a shift achieved.
    Numeric { context: &'static str, value: f64 },
    /// The pool is larger than a guarded routine accepts without `force`.
    PoolTooLarge { n: usize, limit: usize },
    /// A configuration that cannot produce a valid trial.
    InvalidConfig(&'static str),
}

impl fmt::Display for CoreError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoreError::ColdStart => write!(f, "initial labeled pool contains a single class"),
            CoreError::NotBinary => write!(f, "labels do not form a binary problem"),
            CoreError::Parse { line, column, what } => {
                write!(f, "parse error at line {line}, column {column}: {what}")
            }
            CoreError::Numeric { context, value } => {
                write!(f, "numeric failure in {context} (value {value:e})")
            }
            CoreError::PoolTooLarge { n, limit } => {
                write!(
                    f,
                    "pool size {n} exceeds limit {limit}; pass force to override"
                )
            }
            CoreError::InvalidConfig(what) => write!(f, "invalid configuration: {what}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for CoreError {}
