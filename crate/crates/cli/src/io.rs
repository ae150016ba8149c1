//! Files on disk: datasets and their manifest, JSONL record streams, the
//! run manifest, the per-cell report, and the resume checkpoint. All
//! snapshot writes go through a tmp-file + rename so readers never see a
//! torn file.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use albench_core::dataset::{self, Dataset};
use albench_core::protocol::TrialRecord;
use albench_core::rng::fnv1a64;
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const MANIFEST_FILE: &str = "manifest.json";
pub const REPORT_FILE: &str = "cells.json";
pub const CHECKPOINT_FILE: &str = "checkpoint";

pub fn dataset_name_from_path(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".to_string())
}

/// Reads and parses a sparse `label idx:val` dataset file.
pub fn load_dataset(path: &Path, name: &str) -> Result<Dataset, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))?;
    dataset::parse_sparse_dataset(name, &text, 0)
        .map_err(|e| CliError::Data(format!("cannot parse {}: {e}", path.display())))
}

/// One line of the datasets manifest: `name path n d`.
#[derive(Debug, Clone, PartialEq)]
pub struct ManifestEntry {
    pub name: String,
    pub path: PathBuf,
    pub n: usize,
    pub d: usize,
}

/// Parses the datasets manifest (whitespace-separated columns, `#`
/// comments). Relative paths resolve against the manifest's directory.
pub fn parse_dataset_manifest(text: &str, base: &Path) -> Result<Vec<ManifestEntry>, CliError> {
    let mut entries = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split_whitespace().collect();
        if cols.len() != 4 {
            return Err(CliError::Data(format!(
                "dataset manifest line {}: expected `name path n d`, found {} columns",
                lineno + 1,
                cols.len()
            )));
        }
        let n: usize = cols[2].parse().map_err(|_| {
            CliError::Data(format!(
                "dataset manifest line {}: bad n `{}`",
                lineno + 1,
                cols[2]
            ))
        })?;
        let d: usize = cols[3].parse().map_err(|_| {
            CliError::Data(format!(
                "dataset manifest line {}: bad d `{}`",
                lineno + 1,
                cols[3]
            ))
        })?;
        let raw = Path::new(cols[1]);
        let path = if raw.is_absolute() {
            raw.to_path_buf()
        } else {
            base.join(raw)
        };
        entries.push(ManifestEntry {
            name: cols[0].to_string(),
            path,
            n,
            d,
        });
    }
    if entries.is_empty() {
        return Err(CliError::Data(
            "dataset manifest lists no datasets".to_string(),
        ));
    }
    Ok(entries)
}

/// Loads a manifest entry and verifies the declared attributes.
pub fn load_verified(entry: &ManifestEntry) -> Result<Dataset, CliError> {
    let ds = load_dataset(&entry.path, &entry.name)?;
    if ds.n() != entry.n || ds.d() != entry.d {
        return Err(CliError::Data(format!(
            "{}: manifest declares n={} d={}, file has n={} d={}",
            entry.name,
            entry.n,
            entry.d,
            ds.n(),
            ds.d()
        )));
    }
    Ok(ds)
}

/// One JSONL line; `queried` is -1 for the t=0 record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecordRow {
    pub dataset: String,
    pub strategy: String,
    pub seed: u64,
    pub t: usize,
    pub queried: i64,
    pub n_labeled: usize,
    pub acc: f64,
    pub wall_ms: u64,
}

pub fn record_row(dataset: &str, strategy: &str, seed: u64, r: &TrialRecord) -> RecordRow {
    RecordRow {
        dataset: dataset.to_string(),
        strategy: strategy.to_string(),
        seed,
        t: r.t,
        queried: r.queried.map(|q| q as i64).unwrap_or(-1),
        n_labeled: r.n_labeled,
        acc: r.acc,
        wall_ms: r.wall_ms,
    }
}

/// Replaces everything outside `[A-Za-z0-9._-]` so names are filesystem
/// safe.
pub fn sanitize_component(name: &str) -> String {
    name.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || matches!(c, '.' | '_' | '-') {
                c
            } else {
                '_'
            }
        })
        .collect()
}

pub fn record_path(dir: &Path, dataset: &str, strategy: &str) -> PathBuf {
    dir.join(format!(
        "records.{}.{}.jsonl",
        sanitize_component(dataset),
        sanitize_component(strategy)
    ))
}

pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    fs::create_dir_all(dir)
        .map_err(|e| CliError::Other(format!("cannot create {}: {e}", dir.display())))?;
    let stem = path
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".to_string());
    let tmp = dir.join(format!(".{stem}.tmp"));
    fs::write(&tmp, bytes)
        .map_err(|e| CliError::Other(format!("cannot write {}: {e}", tmp.display())))?;
    fs::rename(&tmp, path)
        .map_err(|e| CliError::Other(format!("cannot finalize {}: {e}", path.display())))?;
    Ok(())
}

pub fn write_jsonl(path: &Path, rows: &[RecordRow]) -> Result<(), CliError> {
    let mut buf = Vec::new();
    for row in rows {
        serde_json::to_writer(&mut buf, row)
            .map_err(|e| CliError::Other(format!("cannot serialize record: {e}")))?;
        buf.push(b'\n');
    }
    atomic_write(path, &buf)
}

pub fn read_jsonl(path: &Path) -> Result<Vec<RecordRow>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))?;
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row: RecordRow = serde_json::from_str(line)
            .map_err(|e| CliError::Data(format!("{} line {}: {e}", path.display(), lineno + 1)))?;
        rows.push(row);
    }
    Ok(rows)
}

/// Identity of one run: the settings that determine its outputs. The
/// worker count and output location are deliberately not part of it —
/// parallelism and placement must not change what a run is.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub config: BTreeMap<String, String>,
    pub datasets_hash: String,
    pub strategies: Vec<String>,
    pub seed_policy: String,
    pub deviations: Vec<String>,
}

pub const SEED_POLICY: &str = "trial seeds 0,1,2,... in launch order; keep the first `keep` \
     DONE trials; all streams derived by FNV-1a over (base seed, dataset, [strategy,] trial \
     seed, tag)";

impl RunManifest {
    pub fn new(
        config: BTreeMap<String, String>,
        datasets_hash: String,
        strategies: Vec<String>,
    ) -> RunManifest {
        RunManifest {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            datasets_hash,
            strategies,
            seed_policy: SEED_POLICY.to_string(),
            deviations: Vec::new(),
        }
    }

    /// Hash of the run identity. Deviations are outcomes, not identity,
    /// so they stay outside the hash.
    pub fn hash(&self) -> String {
        let key = serde_json::to_string(&(
            &self.tool_version,
            &self.config,
            &self.datasets_hash,
            &self.strategies,
            &self.seed_policy,
        ))
        .expect("manifest identity serializes");
        format!("{:016x}", fnv1a64(key.as_bytes()))
    }
}

pub fn write_manifest(dir: &Path, manifest: &RunManifest) -> Result<(), CliError> {
    let json = serde_json::to_string_pretty(manifest)
        .map_err(|e| CliError::Other(format!("cannot serialize manifest: {e}")))?;
    atomic_write(&dir.join(MANIFEST_FILE), json.as_bytes())
}

pub fn read_manifest(dir: &Path) -> Result<Option<RunManifest>, CliError> {
    let path = dir.join(MANIFEST_FILE);
    if !path.exists() {
        return Ok(None);
    }
    let text = fs::read_to_string(&path)
        .map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))?;
    let manifest = serde_json::from_str(&text)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    Ok(Some(manifest))
}

/// Hash of one dataset's bytes, as stored in the run manifest.
pub fn hash_dataset_file(path: &Path) -> Result<String, CliError> {
    let bytes = fs::read(path)
        .map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))?;
    Ok(format!("{:016x}", fnv1a64(&bytes)))
}

/// Combines named dataset hashes into one digest, order-independent.
pub fn combine_hashes(named: &mut Vec<(String, String)>) -> String {
    named.sort();
    let mut text = String::new();
    for (name, hash) in named.iter() {
        text.push_str(name);
        text.push(':');
        text.push_str(hash);
        text.push('\n');
    }
    format!("{:016x}", fnv1a64(text.as_bytes()))
}

/// Outcome summary for one (dataset, strategy) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellReport {
    pub dataset: String,
    pub strategy: String,
    pub kept: usize,
    pub attempted: usize,
    pub tle: bool,
    pub underfilled: bool,
    /// (trial seed, status) for every launched trial.
    pub statuses: Vec<(u64, String)>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetReport {
    pub name: String,
    pub n: usize,
    pub d: usize,
    pub imbalance: f64,
}

/// Sidecar consumed by `analyze`: flags and dataset attributes that the
/// raw record streams cannot carry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub manifest_hash: String,
    pub datasets: Vec<DatasetReport>,
    pub cells: Vec<CellReport>,
}

pub fn write_report(dir: &Path, report: &RunReport) -> Result<(), CliError> {
    let json = serde_json::to_string_pretty(report)
        .map_err(|e| CliError::Other(format!("cannot serialize report: {e}")))?;
    atomic_write(&dir.join(REPORT_FILE), json.as_bytes())
}

pub fn read_report(dir: &Path) -> Result<Option<RunReport>, CliError> {
    let path = dir.join(REPORT_FILE);
    if !path.exists() {
        return Ok(None);
    }
    let text = fs::read_to_string(&path)
        .map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))?;
    let report = serde_json::from_str(&text)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    Ok(Some(report))
}

/// Completed work, for resume. Trial lines are informational; the
/// `CELL-DONE` marker plus an existing record file is what lets a rerun
/// skip a cell.
#[derive(Debug, Default, Clone)]
pub struct Checkpoint {
    pub done_cells: Vec<(String, String)>,
}

impl Checkpoint {
    pub fn is_cell_done(&self, dataset: &str, strategy: &str) -> bool {
        self.done_cells
            .iter()
            .any(|(d, s)| d == dataset && s == strategy)
    }
}

pub fn read_checkpoint(dir: &Path) -> Checkpoint {
    let mut cp = Checkpoint::default();
    let Ok(text) = fs::read_to_string(dir.join(CHECKPOINT_FILE)) else {
        return cp;
    };
    for line in text.lines() {
        let cols: Vec<&str> = line.split('\t').collect();
        // A torn final line from a crash parses short and is ignored.
        if cols.len() == 4 && cols[2] == "=" && cols[3] == "CELL-DONE" {
            cp.done_cells
                .push((cols[0].to_string(), cols[1].to_string()));
        }
    }
    cp
}

/// Appends trial statuses and the completion marker for one cell.
pub fn append_checkpoint(
    dir: &Path,
    dataset: &str,
    strategy: &str,
    statuses: &[(u64, String)],
) -> Result<(), CliError> {
    let mut file = fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(dir.join(CHECKPOINT_FILE))
        .map_err(|e| CliError::Other(format!("cannot open checkpoint: {e}")))?;
    let mut buf = String::new();
    for (seed, status) in statuses {
        buf.push_str(&format!("{dataset}\t{strategy}\t{seed}\t{status}\n"));
    }
    buf.push_str(&format!("{dataset}\t{strategy}\t=\tCELL-DONE\n"));
    file.write_all(buf.as_bytes())
        .map_err(|e| CliError::Other(format!("cannot append checkpoint: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_roundtrip_and_paths() {
        let text = "# comment\nheart data/heart.libsvm 270 13\n\nwdbc /abs/wdbc.libsvm 569 30\n";
        let entries = parse_dataset_manifest(text, Path::new("/base")).unwrap();
        assert_eq!(entries.len(), 2);
        assert_eq!(entries[0].name, "heart");
        assert_eq!(entries[0].path, Path::new("/base/data/heart.libsvm"));
        assert_eq!(entries[1].path, Path::new("/abs/wdbc.libsvm"));
        assert_eq!(entries[1].n, 569);

        assert!(parse_dataset_manifest("a b c\n", Path::new(".")).is_err());
        assert!(parse_dataset_manifest("", Path::new(".")).is_err());
    }

    #[test]
    fn record_rows_serialize_with_the_contract_keys() {
        let r = TrialRecord {
            t: 0,
            queried: None,
            n_labeled: 20,
            acc: 0.5,
            wall_ms: 3,
        };
        let row = record_row("ds", "uniform", 7, &r);
        let json = serde_json::to_string(&row).unwrap();
        assert_eq!(
            json,
            "{\"dataset\":\"ds\",\"strategy\":\"uniform\",\"seed\":7,\"t\":0,\
             \"queried\":-1,\"n_labeled\":20,\"acc\":0.5,\"wall_ms\":3}"
        );
        let r1 = TrialRecord {
            t: 2,
            queried: Some(41),
            n_labeled: 22,
            acc: 0.75,
            wall_ms: 9,
        };
        assert_eq!(record_row("ds", "uniform", 7, &r1).queried, 41);
    }

    #[test]
    fn jsonl_roundtrip_is_lossless() {
        let dir = std::env::temp_dir().join(format!("albench-io-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("records.a.b.jsonl");
        let rows = vec![
            record_row(
                "a",
                "b",
                0,
                &TrialRecord {
                    t: 0,
                    queried: None,
                    n_labeled: 5,
                    acc: 0.5,
                    wall_ms: 0,
                },
            ),
            record_row(
                "a",
                "b",
                0,
                &TrialRecord {
                    t: 1,
                    queried: Some(3),
                    n_labeled: 6,
                    acc: 0.625,
                    wall_ms: 0,
                },
            ),
        ];
        write_jsonl(&path, &rows).unwrap();
        assert_eq!(read_jsonl(&path).unwrap(), rows);
        fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn manifest_hash_ignores_deviations() {
        let mut m = RunManifest::new(BTreeMap::new(), "h".to_string(), vec!["uniform".into()]);
        let h0 = m.hash();
        m.deviations.push("note".to_string());
        assert_eq!(m.hash(), h0);
        m.config.insert("budget".into(), "5".into());
        assert_ne!(m.hash(), h0);
    }

    #[test]
    fn combined_hash_is_order_independent() {
        let mut a = vec![
            ("x".to_string(), "1".to_string()),
            ("y".to_string(), "2".to_string()),
        ];
        let mut b = vec![
            ("y".to_string(), "2".to_string()),
            ("x".to_string(), "1".to_string()),
        ];
        assert_eq!(combine_hashes(&mut a), combine_hashes(&mut b));
    }

    #[test]
    fn checkpoint_roundtrip_and_torn_lines() {
        let dir = std::env::temp_dir().join(format!("albench-cp-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        append_checkpoint(
            &dir,
            "ds",
            "uniform",
            &[(0, "DONE".into()), (1, "COLD_START".into())],
        )
        .unwrap();
        // Simulate a crash-torn trailing line.
        let mut f = fs::OpenOptions::new()
            .append(true)
            .open(dir.join(CHECKPOINT_FILE))
            .unwrap();
        f.write_all(b"ds\tqbc\t0").unwrap();
        drop(f);
        let cp = read_checkpoint(&dir);
        assert!(cp.is_cell_done("ds", "uniform"));
        assert!(!cp.is_cell_done("ds", "qbc"));
        fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn sanitization_keeps_safe_characters() {
        assert_eq!(sanitize_component("heart-2.0_x"), "heart-2.0_x");
        assert_eq!(sanitize_component("a/b c"), "a_b_c");
    }
}
