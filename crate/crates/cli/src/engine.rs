//! The experiment engine: per-cell retention policy (first `keep` DONE
//! trials of up to `attempts`, seeds launched in order 0,1,2,...), a
//! worker pool over cells, and idempotent output-directory management
//! with checkpointed resume.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{mpsc, Arc};
use std::time::Instant;

use albench_core::dataset::{imbalance_ratio, Dataset};
use albench_core::protocol::{self, ProtocolConfig, TrialOutcome, TrialStatus};

use crate::io::{self, CellReport, DatasetReport, RecordRow, RunManifest, RunReport};
use crate::CliError;

/// Source of the `wall_ms` fields and trial deadlines. `Zero` writes 0
/// everywhere and disables trial deadlines, buying byte-identical
/// reruns; `Wall` records real elapsed milliseconds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Timing {
    Zero,
    Wall,
}

impl Timing {
    pub fn parse(raw: &str) -> Result<Timing, CliError> {
        match raw {
            "zero" => Ok(Timing::Zero),
            "wall" => Ok(Timing::Wall),
            other => Err(CliError::Usage(format!(
                "unknown timing `{other}`; known: zero, wall"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Timing::Zero => "zero",
            Timing::Wall => "wall",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BsoParams {
    pub w: usize,
    pub e: usize,
    pub force: bool,
}

/// One (dataset, strategy) cell of work.
pub struct CellSpec {
    pub dataset: Arc<Dataset>,
    pub protocol: ProtocolConfig,
    pub keep: usize,
    pub attempts: usize,
    pub timing: Timing,
    pub trial_timeout_ms: Option<u64>,
    pub cell_timeout_ms: Option<u64>,
    /// Set for strategy `bso`, which runs through the oracle driver.
    pub bso: Option<BsoParams>,
    /// Record-file label; defaults to the strategy name. The compat grid
    /// uses it to keep its 3x3 cells in separate files.
    pub file_tag: Option<String>,
}

impl CellSpec {
    pub fn file_tag(&self) -> &str {
        self.file_tag.as_deref().unwrap_or(&self.protocol.strategy)
    }
}

pub struct CellOutcome {
    pub dataset: String,
    pub strategy: String,
    pub file_tag: String,
    /// Records of kept DONE trials, ordered by (seed, t).
    pub rows: Vec<RecordRow>,
    pub report: CellReport,
}

fn status_name(status: &TrialStatus) -> String {
    match status {
        TrialStatus::Done => "DONE".to_string(),
        TrialStatus::ColdStart => "COLD_START".to_string(),
        TrialStatus::Tle => "TLE".to_string(),
        TrialStatus::ModuleError(detail) => format!("MODULE_ERROR({detail})"),
    }
}

fn run_one(spec: &CellSpec, seed: u64) -> TrialOutcome {
    let started = Instant::now();
    let (mut clock, timeout): (Box<dyn FnMut() -> u64>, Option<u64>) = match spec.timing {
        Timing::Zero => (Box::new(|| 0), None),
        Timing::Wall => (
            Box::new(move || started.elapsed().as_millis() as u64),
            spec.trial_timeout_ms,
        ),
    };
    match &spec.bso {
        Some(p) => protocol::run_bso_trial(
            &spec.protocol,
            &spec.dataset,
            seed,
            p.w,
            p.e,
            p.force,
            &mut clock,
            timeout,
        ),
        None => protocol::run_trial(&spec.protocol, &spec.dataset, seed, &mut clock, timeout),
    }
}

/// Launches trial seeds 0,1,2,... in order, counts only DONE trials,
/// and stops after `keep` successes, `attempts` launches, or the cell
/// time budget. Only DONE trials contribute records.
pub fn run_cell(spec: &CellSpec) -> CellOutcome {
    let started = Instant::now();
    let mut rows = Vec::new();
    let mut statuses = Vec::new();
    let mut notes = Vec::new();
    let mut kept = 0usize;
    let mut tle = false;

    for attempt in 0..spec.attempts {
        if kept >= spec.keep {
            break;
        }
        if let Some(limit) = spec.cell_timeout_ms {
            if started.elapsed().as_millis() as u64 >= limit {
                tle = true;
                notes.push("cell time limit reached before the keep quota".to_string());
                break;
            }
        }
        let seed = attempt as u64;
        let outcome = run_one(spec, seed);
        statuses.push((seed, status_name(&outcome.status)));
        for note in &outcome.notes {
            let tagged = format!("seed {seed}: {note}");
            if !notes.contains(&tagged) {
                notes.push(tagged);
            }
        }
        match outcome.status {
            TrialStatus::Done => {
                kept += 1;
                for r in &outcome.records {
                    rows.push(io::record_row(
                        &spec.protocol.dataset,
                        &spec.protocol.strategy,
                        seed,
                        r,
                    ));
                }
            }
            TrialStatus::Tle => tle = true,
            TrialStatus::ColdStart | TrialStatus::ModuleError(_) => {}
        }
    }

    let underfilled = kept < spec.keep;
    CellOutcome {
        dataset: spec.protocol.dataset.clone(),
        strategy: spec.protocol.strategy.clone(),
        file_tag: spec.file_tag().to_string(),
        rows,
        report: CellReport {
            dataset: spec.protocol.dataset.clone(),
            strategy: spec.file_tag().to_string(),
            kept,
            attempted: statuses.len(),
            tle,
            underfilled,
            statuses,
            notes,
        },
    }
}

/// Runs cells on `jobs` workers. Results come back in cell order no
/// matter how the workers interleave, so downstream writes are
/// deterministic.
pub fn run_cells(
    cells: Vec<CellSpec>,
    jobs: usize,
    progress: &mut dyn FnMut(&CellOutcome),
) -> Vec<CellOutcome> {
    let jobs = jobs.max(1).min(cells.len().max(1));
    if jobs == 1 {
        return cells
            .iter()
            .map(|c| {
                let out = run_cell(c);
                progress(&out);
                out
            })
            .collect();
    }

    let total = cells.len();
    let cells = Arc::new(cells);
    let next = Arc::new(AtomicUsize::new(0));
    let (tx, rx) = mpsc::channel::<(usize, CellOutcome)>();
    let mut handles = Vec::new();
    for _ in 0..jobs {
        let cells = Arc::clone(&cells);
        let next = Arc::clone(&next);
        let tx = tx.clone();
        handles.push(std::thread::spawn(move || loop {
            let i = next.fetch_add(1, Ordering::SeqCst);
            if i >= cells.len() {
                break;
            }
            let out = run_cell(&cells[i]);
            if tx.send((i, out)).is_err() {
                break;
            }
        }));
    }
    drop(tx);

    let mut slots: Vec<Option<CellOutcome>> = (0..total).map(|_| None).collect();
    for (i, out) in rx {
        progress(&out);
        slots[i] = Some(out);
    }
    for h in handles {
        h.join().expect("worker panicked");
    }
    slots
        .into_iter()
        .map(|s| s.expect("every cell reports"))
        .collect()
}

/// A full run: cells, identity, destination.
pub struct GridRun {
    pub out_dir: PathBuf,
    pub manifest: RunManifest,
    pub datasets: Vec<DatasetReport>,
    pub cells: Vec<CellSpec>,
    pub jobs: usize,
}

#[derive(Debug)]
pub struct ExecSummary {
    pub kept_trials: usize,
    pub skipped_cells: usize,
    pub tle_cells: Vec<String>,
    pub underfilled_cells: Vec<String>,
}

pub fn dataset_report(ds: &Dataset) -> DatasetReport {
    DatasetReport {
        name: ds.name.clone(),
        n: ds.n(),
        d: ds.d(),
        // -1 marks a single-class dataset; every trial on it cold-starts.
        imbalance: imbalance_ratio(&ds.y).unwrap_or(-1.0),
    }
}

/// Executes a run into its output directory: verifies the manifest
/// (exactly one identity per directory), skips checkpoint-complete
/// cells, runs the rest, and writes records, checkpoint, report, and
/// manifest. Progress goes to the status channel (stderr); files carry
/// only machine data.
pub fn execute(run: GridRun) -> Result<ExecSummary, CliError> {
    std::fs::create_dir_all(&run.out_dir)
        .map_err(|e| CliError::Other(format!("cannot create {}: {e}", run.out_dir.display())))?;

    let hash = run.manifest.hash();
    if let Some(existing) = io::read_manifest(&run.out_dir)? {
        if existing.hash() != hash {
            return Err(CliError::Mixed(format!(
                "output directory {} holds manifest {}, this run is {}; \
                 one directory carries exactly one run",
                run.out_dir.display(),
                existing.hash(),
                hash
            )));
        }
    }

    let checkpoint = io::read_checkpoint(&run.out_dir);
    let previous = io::read_report(&run.out_dir)?;
    let mut reports: BTreeMap<(String, String), CellReport> = previous
        .map(|r| r.cells)
        .unwrap_or_default()
        .into_iter()
        .map(|c| ((c.dataset.clone(), c.strategy.clone()), c))
        .collect();

    let mut todo = Vec::new();
    let mut skipped = 0usize;
    for cell in run.cells {
        let tag = cell.file_tag().to_string();
        let record_file = io::record_path(&run.out_dir, &cell.protocol.dataset, &tag);
        if checkpoint.is_cell_done(&cell.protocol.dataset, &tag) && record_file.exists() {
            eprintln!(
                "cell {}/{}: complete (checkpoint), skipping",
                cell.protocol.dataset, tag
            );
            skipped += 1;
            continue;
        }
        todo.push(cell);
    }

    let mut kept_trials = 0usize;
    let outcomes = run_cells(todo, run.jobs, &mut |out| {
        eprintln!(
            "cell {}/{}: kept {} of {} attempted{}{}",
            out.dataset,
            out.file_tag,
            out.report.kept,
            out.report.attempted,
            if out.report.tle { " [TLE]" } else { "" },
            if out.report.underfilled {
                " [UNDERFILLED]"
            } else {
                ""
            },
        );
    });

    for out in &outcomes {
        io::write_jsonl(
            &io::record_path(&run.out_dir, &out.dataset, &out.file_tag),
            &out.rows,
        )?;
        io::append_checkpoint(
            &run.out_dir,
            &out.dataset,
            &out.file_tag,
            &out.report.statuses,
        )?;
        kept_trials += out.report.kept;
        reports.insert(
            (out.dataset.clone(), out.file_tag.clone()),
            out.report.clone(),
        );
    }

    let mut manifest = run.manifest;
    for report in reports.values() {
        if report.tle {
            manifest.deviations.push(format!(
                "cell {}/{} hit a time limit",
                report.dataset, report.strategy
            ));
        }
        if report.underfilled {
            manifest.deviations.push(format!(
                "cell {}/{} underfilled: kept {} of the target",
                report.dataset, report.strategy, report.kept
            ));
        }
    }
    io::write_manifest(&run.out_dir, &manifest)?;

    let mut datasets = run.datasets;
    datasets.sort_by(|a, b| a.name.cmp(&b.name));
    datasets.dedup_by(|a, b| a.name == b.name);
    let report = RunReport {
        manifest_hash: hash,
        datasets,
        cells: reports.into_values().collect(),
    };
    io::write_report(&run.out_dir, &report)?;

    let tle_cells: Vec<String> = report
        .cells
        .iter()
        .filter(|c| c.tle)
        .map(|c| format!("{}/{}", c.dataset, c.strategy))
        .collect();
    let underfilled_cells: Vec<String> = report
        .cells
        .iter()
        .filter(|c| c.underfilled)
        .map(|c| format!("{}/{}", c.dataset, c.strategy))
        .collect();
    for name in &tle_cells {
        eprintln!("status: TLE cell {name}");
    }
    for name in &underfilled_cells {
        eprintln!("status: UNDERFILLED cell {name}");
    }

    Ok(ExecSummary {
        kept_trials,
        skipped_cells: skipped,
        tle_cells,
        underfilled_cells,
    })
}
