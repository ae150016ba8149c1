//! Run settings with the documented precedence: built-in defaults, then
//! the key=value config file, then the environment (`ALBENCH_OUT`), then
//! command-line flags.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use albench_core::learners::LearnerSpec;

use crate::CliError;

pub const DEFAULT_OUT: &str = "albench-out";
pub const ENV_OUT: &str = "ALBENCH_OUT";

/// Desk-scale defaults: 120 s per trial, 30 min per cell.
pub const DEFAULT_TRIAL_TIMEOUT_SECS: u64 = 120;
pub const DEFAULT_CELL_TIMEOUT_SECS: u64 = 1800;

/// Repeat policy by dataset size class: small keeps the first 100 DONE
/// of up to 150 launches, large 10 of 15.
pub const SMALL_DATASET_LIMIT: usize = 2000;
pub const SMALL_KEEP: usize = 100;
pub const SMALL_ATTEMPTS: usize = 150;
pub const LARGE_KEEP: usize = 10;
pub const LARGE_ATTEMPTS: usize = 15;

pub fn default_keep(n: usize) -> usize {
    if n < SMALL_DATASET_LIMIT {
        SMALL_KEEP
    } else {
        LARGE_KEEP
    }
}

/// Attempts default to 1.5x keep, matching the 150/100 and 15/10 pairs.
pub fn default_attempts(keep: usize) -> usize {
    keep + keep.div_ceil(2)
}

const KNOWN_KEYS: [&str; 23] = [
    "data",
    "manifest",
    "strategy",
    "strategies",
    "query-model",
    "task-model",
    "seed",
    "keep",
    "attempts",
    "test-fraction",
    "init-labeled",
    "budget",
    "jobs",
    "cell-timeout",
    "trial-timeout",
    "out",
    "timing",
    "w",
    "e",
    "force",
    "models",
    "tables",
    "results",
];

/// key=value file; `#` starts a comment, blank lines are skipped.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Usage(format!(
                "config line {}: expected key=value, found `{line}`",
                lineno + 1
            )));
        };
        let key = key.trim().to_string();
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(CliError::Usage(format!(
                "config line {}: unknown key `{key}`",
                lineno + 1
            )));
        }
        map.insert(key, value.trim().to_string());
    }
    Ok(map)
}

/// Merges one setting across the precedence chain. Flags always win;
/// the config file fills the rest.
pub struct Resolver {
    file: BTreeMap<String, String>,
    env_out: Option<String>,
}

impl Resolver {
    pub fn new(config_path: Option<&Path>) -> Result<Resolver, CliError> {
        let file = match config_path {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| {
                    CliError::Usage(format!("cannot read config {}: {e}", p.display()))
                })?;
                parse_config(&text)?
            }
            None => BTreeMap::new(),
        };
        Ok(Resolver {
            file,
            env_out: std::env::var(ENV_OUT).ok(),
        })
    }

    #[cfg(test)]
    pub fn from_parts(file: BTreeMap<String, String>, env_out: Option<String>) -> Resolver {
        Resolver { file, env_out }
    }

    pub fn string(&self, flag: Option<&str>, key: &str) -> Option<String> {
        flag.map(str::to_string)
            .or_else(|| self.file.get(key).cloned())
    }

    fn parsed<T: std::str::FromStr>(
        &self,
        flag: Option<T>,
        key: &str,
    ) -> Result<Option<T>, CliError> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.file.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse::<T>()
                .map(Some)
                .map_err(|_| CliError::Usage(format!("config key `{key}`: cannot parse `{raw}`"))),
        }
    }

    pub fn usize(&self, flag: Option<usize>, key: &str) -> Result<Option<usize>, CliError> {
        self.parsed(flag, key)
    }

    pub fn u64(&self, flag: Option<u64>, key: &str) -> Result<Option<u64>, CliError> {
        self.parsed(flag, key)
    }

    pub fn f64(&self, flag: Option<f64>, key: &str) -> Result<Option<f64>, CliError> {
        self.parsed(flag, key)
    }

    pub fn flag(&self, flag: bool, key: &str) -> Result<bool, CliError> {
        if flag {
            return Ok(true);
        }
        match self.file.get(key).map(String::as_str) {
            None => Ok(false),
            Some("true") | Some("1") => Ok(true),
            Some("false") | Some("0") => Ok(false),
            Some(other) => Err(CliError::Usage(format!(
                "config key `{key}`: expected true/false, found `{other}`"
            ))),
        }
    }

    /// flag > config `out` > $ALBENCH_OUT > ./albench-out
    pub fn out_dir(&self, flag: Option<&Path>) -> PathBuf {
        if let Some(p) = flag {
            return p.to_path_buf();
        }
        if let Some(p) = self.file.get("out") {
            return PathBuf::from(p);
        }
        if let Some(p) = &self.env_out {
            return PathBuf::from(p);
        }
        PathBuf::from(DEFAULT_OUT)
    }
}

/// Model names accepted by `--query-model`, `--task-model`, `--models`.
pub fn parse_model(name: &str) -> Result<LearnerSpec, CliError> {
    match name.to_ascii_lowercase().replace('_', "-").as_str() {
        "lr" => Ok(LearnerSpec::lr(1.0)),
        "svm-rbf" | "svm" => Ok(LearnerSpec::svm_rbf(1.0)),
        "svm-linear" => Ok(LearnerSpec::svm_linear(1.0)),
        "rf" => Ok(LearnerSpec::rf(100)),
        "lda" => Ok(LearnerSpec::lda()),
        other => Err(CliError::Usage(format!(
            "unknown model `{other}`; known: lr, svm-rbf, svm-linear, rf, lda"
        ))),
    }
}

/// Comma-separated list for `--models` / `--strategies`.
pub fn parse_list(raw: &str) -> Vec<String> {
    raw.split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect()
}
