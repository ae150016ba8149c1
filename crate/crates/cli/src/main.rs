//! `albench`: a reproducible benchmark engine for pool-based active
//! learning on binary tabular datasets.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use albench::config::{self, Resolver};
use albench::csvout;
use albench::engine::{self, BsoParams, CellSpec, GridRun, Timing};
use albench::io;
use albench::CliError;
use albench_core::bso;
use albench_core::protocol::ProtocolConfig;
use albench_core::stats;
use albench_core::strategies::STRATEGY_NAMES;

#[derive(Parser)]
#[command(
    name = "albench",
    version,
    about = "Reproducible benchmarking of pool-based active learning on binary tabular data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one strategy on one dataset
    Run(RunArgs),
    /// Run a dataset-manifest x strategy grid
    Grid(GridArgs),
    /// Render analysis tables from results directories
    Analyze(AnalyzeArgs),
    /// Query-model x task-model compatibility grid on one dataset
    Compat(CompatArgs),
    /// Beam-search oracle on one dataset
    Bso(BsoArgs),
}

/// Flags shared by every experiment command. Precedence: built-in
/// defaults < config file < ALBENCH_OUT < flags.
#[derive(Args, Debug, Default, Clone)]
struct Shared {
    /// Config file with key=value lines (# comments)
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Base seed folded into every derived random stream
    #[arg(long)]
    seed: Option<u64>,
    /// Completed trials to keep per cell (default: 100 small / 10 large)
    #[arg(long)]
    keep: Option<usize>,
    /// Maximum trial launches per cell (default: keep + keep/2)
    #[arg(long)]
    attempts: Option<usize>,
    /// Held-out test fraction
    #[arg(long = "test-fraction")]
    test_fraction: Option<f64>,
    /// Initially labeled examples
    #[arg(long = "init-labeled")]
    init_labeled: Option<usize>,
    /// Query budget; defaults to the full unlabeled pool
    #[arg(long)]
    budget: Option<usize>,
    /// Per-trial time limit in seconds (wall timing only; default 120)
    #[arg(long = "trial-timeout")]
    trial_timeout: Option<u64>,
    /// Per-cell time limit in seconds (wall timing only; default 1800)
    #[arg(long = "cell-timeout")]
    cell_timeout: Option<u64>,
    /// Output directory (also the ALBENCH_OUT environment variable)
    #[arg(long)]
    out: Option<PathBuf>,
    /// `wall` records real times; `zero` writes wall_ms = 0 and disables
    /// time limits so reruns are byte-identical
    #[arg(long)]
    timing: Option<String>,
    /// Worker threads over cells; never part of the run identity
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct RunArgs {
    /// Dataset file: one `label idx:val ...` row per example, labels +/-1
    #[arg(long)]
    data: Option<PathBuf>,
    /// Strategy name from the registry
    #[arg(long)]
    strategy: Option<String>,
    /// Query model (default: the strategy's own default)
    #[arg(long = "query-model")]
    query_model: Option<String>,
    /// Task model evaluated on the test split (default: svm-rbf)
    #[arg(long = "task-model")]
    task_model: Option<String>,
    /// Beam width for the bso strategy
    #[arg(long)]
    w: Option<usize>,
    /// Expansions per beam state for the bso strategy
    #[arg(long)]
    e: Option<usize>,
    /// Run bso even past its pool-size gate
    #[arg(long)]
    force: bool,
    #[command(flatten)]
    shared: Shared,
}

#[derive(Args)]
struct GridArgs {
    /// Dataset manifest: lines of `name path n d`
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// Comma-separated strategies (default: every strategy except bso)
    #[arg(long)]
    strategies: Option<String>,
    /// Query model applied to every strategy (default: per-strategy)
    #[arg(long = "query-model")]
    query_model: Option<String>,
    /// Task model (default: svm-rbf)
    #[arg(long = "task-model")]
    task_model: Option<String>,
    /// Beam width if the grid includes bso
    #[arg(long)]
    w: Option<usize>,
    /// Expansions per beam state if the grid includes bso
    #[arg(long)]
    e: Option<usize>,
    /// Run bso even past its pool-size gate
    #[arg(long)]
    force: bool,
    #[command(flatten)]
    shared: Shared,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Results directory; repeat to merge shards of one run
    #[arg(long = "results", value_name = "DIR")]
    results: Vec<PathBuf>,
    /// Comma list of summary,ranking,usefulness,delta (default: all)
    #[arg(long)]
    tables: Option<String>,
    /// Where the tables go (default: the first results directory)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Config file with key=value lines
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct CompatArgs {
    /// Dataset file
    #[arg(long)]
    data: Option<PathBuf>,
    /// Comma list of models spanning the grid (default: lr,svm-rbf,rf)
    #[arg(long)]
    models: Option<String>,
    #[command(flatten)]
    shared: Shared,
}

#[derive(Args)]
struct BsoArgs {
    /// Dataset file
    #[arg(long)]
    data: Option<PathBuf>,
    /// Beam width
    #[arg(long)]
    w: Option<usize>,
    /// Expansions per beam state
    #[arg(long)]
    e: Option<usize>,
    /// Run even past the pool-size gate
    #[arg(long)]
    force: bool,
    /// Task model scored by the beam (default: svm-rbf)
    #[arg(long = "task-model")]
    task_model: Option<String>,
    #[command(flatten)]
    shared: Shared,
}

/// Shared flags after precedence resolution.
struct Settings {
    base_seed: u64,
    keep: Option<usize>,
    attempts: Option<usize>,
    test_fraction: Option<f64>,
    init_labeled: Option<usize>,
    budget: Option<usize>,
    timing: Timing,
    trial_timeout_ms: Option<u64>,
    cell_timeout_ms: Option<u64>,
    jobs: usize,
    out: PathBuf,
}

impl Settings {
    /// Keep/attempts for a dataset of n rows, defaults by size class.
    fn keep_attempts(&self, n: usize) -> Result<(usize, usize), CliError> {
        let keep = self.keep.unwrap_or_else(|| config::default_keep(n));
        let attempts = self
            .attempts
            .unwrap_or_else(|| config::default_attempts(keep));
        if keep == 0 {
            return Err(CliError::Usage("keep must be at least 1".to_string()));
        }
        if attempts < keep {
            return Err(CliError::Usage(format!(
                "attempts ({attempts}) must be at least keep ({keep})"
            )));
        }
        Ok((keep, attempts))
    }
}

fn resolve_shared(shared: &Shared, r: &Resolver) -> Result<Settings, CliError> {
    let timing_raw = r
        .string(shared.timing.as_deref(), "timing")
        .unwrap_or_else(|| "wall".to_string());
    let timing = Timing::parse(&timing_raw)?;
    let trial_secs = r
        .u64(shared.trial_timeout, "trial-timeout")?
        .unwrap_or(config::DEFAULT_TRIAL_TIMEOUT_SECS);
    let cell_secs = r
        .u64(shared.cell_timeout, "cell-timeout")?
        .unwrap_or(config::DEFAULT_CELL_TIMEOUT_SECS);
    let (trial_timeout_ms, cell_timeout_ms) = match timing {
        Timing::Zero => (None, None),
        Timing::Wall => (Some(trial_secs * 1000), Some(cell_secs * 1000)),
    };
    Ok(Settings {
        base_seed: r.u64(shared.seed, "seed")?.unwrap_or(0),
        keep: r.usize(shared.keep, "keep")?,
        attempts: r.usize(shared.attempts, "attempts")?,
        test_fraction: r.f64(shared.test_fraction, "test-fraction")?,
        init_labeled: r.usize(shared.init_labeled, "init-labeled")?,
        budget: r.usize(shared.budget, "budget")?,
        timing,
        trial_timeout_ms,
        cell_timeout_ms,
        jobs: r.usize(shared.jobs, "jobs")?.unwrap_or(1),
        out: r.out_dir(shared.out.as_deref()),
    })
}

fn validate_strategy(name: &str) -> Result<(), CliError> {
    if STRATEGY_NAMES.contains(&name) {
        return Ok(());
    }
    Err(CliError::Usage(format!(
        "unknown strategy `{name}`\nknown strategies: {}",
        STRATEGY_NAMES.join(", ")
    )))
}

fn build_protocol(
    dataset: &str,
    strategy: &str,
    s: &Settings,
    query_model: Option<&str>,
    task_model: Option<&str>,
) -> Result<ProtocolConfig, CliError> {
    let mut cfg = ProtocolConfig::new(dataset, strategy);
    if let Some(tm) = task_model {
        cfg.task_spec = config::parse_model(tm)?;
        if strategy == "us-c" && query_model.is_none() {
            // The compatible sampler queries with the task model.
            cfg.query_spec = cfg.task_spec.clone();
        }
    }
    if let Some(qm) = query_model {
        cfg.query_spec = config::parse_model(qm)?;
    }
    if let Some(tf) = s.test_fraction {
        if !(tf > 0.0 && tf < 1.0) {
            return Err(CliError::Usage(format!(
                "test-fraction {tf} must be in (0, 1)"
            )));
        }
        cfg.test_fraction = tf;
    }
    if let Some(m) = s.init_labeled {
        if m < 2 {
            return Err(CliError::Usage(
                "init-labeled must be at least 2".to_string(),
            ));
        }
        cfg.init_labeled = m;
    }
    cfg.budget = s.budget;
    cfg.base_seed = s.base_seed;
    Ok(cfg)
}

/// The run-identity config snapshot. The worker count and the output
/// location are deliberately left out: parallelism and placement must
/// not change what a run is.
fn config_snapshot(s: &Settings, extra: &[(&str, String)]) -> BTreeMap<String, String> {
    let mut map = BTreeMap::new();
    let opt = |v: Option<usize>, fallback: &str| {
        v.map(|x| x.to_string())
            .unwrap_or_else(|| fallback.to_string())
    };
    map.insert("seed".to_string(), s.base_seed.to_string());
    map.insert("keep".to_string(), opt(s.keep, "auto"));
    map.insert("attempts".to_string(), opt(s.attempts, "auto"));
    map.insert(
        "test-fraction".to_string(),
        s.test_fraction
            .map(|v| v.to_string())
            .unwrap_or_else(|| "default".to_string()),
    );
    map.insert("init-labeled".to_string(), opt(s.init_labeled, "default"));
    map.insert("budget".to_string(), opt(s.budget, "full"));
    map.insert("timing".to_string(), s.timing.name().to_string());
    map.insert(
        "trial-timeout-ms".to_string(),
        s.trial_timeout_ms
            .map(|v| v.to_string())
            .unwrap_or_else(|| "none".to_string()),
    );
    map.insert(
        "cell-timeout-ms".to_string(),
        s.cell_timeout_ms
            .map(|v| v.to_string())
            .unwrap_or_else(|| "none".to_string()),
    );
    for (k, v) in extra {
        map.insert((*k).to_string(), v.clone());
    }
    map
}

fn path_string(p: Option<&Path>) -> Option<String> {
    p.map(|p| p.to_string_lossy().into_owned())
}

fn require(value: Option<String>, what: &str) -> Result<String, CliError> {
    value.ok_or_else(|| CliError::Usage(format!("missing {what}")))
}

fn resolve_bso_params(
    r: &Resolver,
    w: Option<usize>,
    e: Option<usize>,
    force: bool,
) -> Result<BsoParams, CliError> {
    let w = r.usize(w, "w")?.unwrap_or(bso::DEFAULT_W);
    let e = r.usize(e, "e")?.unwrap_or(bso::DEFAULT_E);
    if w == 0 || e == 0 {
        return Err(CliError::Usage("bso needs w >= 1 and e >= 1".to_string()));
    }
    Ok(BsoParams {
        w,
        e,
        force: r.flag(force, "force")?,
    })
}

fn cmd_run(args: RunArgs) -> Result<(), CliError> {
    let r = Resolver::new(args.shared.config.as_deref())?;
    let s = resolve_shared(&args.shared, &r)?;

    let data = require(
        r.string(path_string(args.data.as_deref()).as_deref(), "data"),
        "--data (or `data` in the config)",
    )?;
    let path = PathBuf::from(data);
    let name = io::dataset_name_from_path(&path);
    let ds = Arc::new(io::load_dataset(&path, &name)?);

    let strategy = require(
        r.string(args.strategy.as_deref(), "strategy"),
        "--strategy (or `strategy` in the config)",
    )?;
    validate_strategy(&strategy)?;

    let query_model = r.string(args.query_model.as_deref(), "query-model");
    let task_model = r.string(args.task_model.as_deref(), "task-model");
    let protocol = build_protocol(
        &name,
        &strategy,
        &s,
        query_model.as_deref(),
        task_model.as_deref(),
    )?;
    let (keep, attempts) = s.keep_attempts(ds.n())?;

    let bso_params = if strategy == "bso" {
        let p = resolve_bso_params(&r, args.w, args.e, args.force)?;
        bso::check_pool_limit(ds.n(), p.force).map_err(|e| CliError::Other(e.to_string()))?;
        Some(p)
    } else {
        None
    };

    let mut extra = vec![
        (
            "query-model",
            query_model.unwrap_or_else(|| "default".to_string()),
        ),
        (
            "task-model",
            task_model.unwrap_or_else(|| "default".to_string()),
        ),
    ];
    if let Some(p) = &bso_params {
        extra.push(("w", p.w.to_string()));
        extra.push(("e", p.e.to_string()));
        extra.push(("force", p.force.to_string()));
    }

    let mut hashes = vec![(name.clone(), io::hash_dataset_file(&path)?)];
    let manifest = RunManifestParts {
        config: config_snapshot(&s, &extra),
        datasets_hash: io::combine_hashes(&mut hashes),
        strategies: vec![strategy.clone()],
    }
    .build();

    let cells = vec![CellSpec {
        dataset: Arc::clone(&ds),
        protocol,
        keep,
        attempts,
        timing: s.timing,
        trial_timeout_ms: s.trial_timeout_ms,
        cell_timeout_ms: s.cell_timeout_ms,
        bso: bso_params,
        file_tag: None,
    }];

    let summary = engine::execute(GridRun {
        out_dir: s.out.clone(),
        manifest,
        datasets: vec![engine::dataset_report(&ds)],
        cells,
        jobs: s.jobs,
    })?;
    if summary.kept_trials == 0 && summary.skipped_cells == 0 {
        return Err(CliError::Other(format!(
            "no trial completed for {name}/{strategy}; see cells.json in {}",
            s.out.display()
        )));
    }
    eprintln!(
        "run complete: {} kept trials in {}",
        summary.kept_trials,
        s.out.display()
    );
    Ok(())
}

/// Tiny builder so run/grid/compat assemble manifests the same way.
struct RunManifestParts {
    config: BTreeMap<String, String>,
    datasets_hash: String,
    strategies: Vec<String>,
}

impl RunManifestParts {
    fn build(self) -> io::RunManifest {
        io::RunManifest::new(self.config, self.datasets_hash, self.strategies)
    }
}

fn non_oracle_strategies() -> Vec<String> {
    STRATEGY_NAMES
        .iter()
        .filter(|s| **s != stats::ORACLE)
        .map(|s| s.to_string())
        .collect()
}

fn cmd_grid(args: GridArgs) -> Result<(), CliError> {
    let r = Resolver::new(args.shared.config.as_deref())?;
    let s = resolve_shared(&args.shared, &r)?;

    let manifest_path = require(
        r.string(path_string(args.manifest.as_deref()).as_deref(), "manifest"),
        "--manifest (or `manifest` in the config)",
    )?;
    let manifest_path = PathBuf::from(manifest_path);
    let text = std::fs::read_to_string(&manifest_path)
        .map_err(|e| CliError::Data(format!("cannot read {}: {e}", manifest_path.display())))?;
    let base = manifest_path.parent().unwrap_or(Path::new("."));
    let entries = io::parse_dataset_manifest(&text, base)?;

    let strategies = match r.string(args.strategies.as_deref(), "strategies") {
        Some(raw) => {
            let list = config::parse_list(&raw);
            if list.is_empty() {
                return Err(CliError::Usage("empty strategy list".to_string()));
            }
            for name in &list {
                validate_strategy(name)?;
            }
            list
        }
        None => non_oracle_strategies(),
    };

    let query_model = r.string(args.query_model.as_deref(), "query-model");
    let task_model = r.string(args.task_model.as_deref(), "task-model");
    let bso_params = if strategies.iter().any(|s| s == "bso") {
        Some(resolve_bso_params(&r, args.w, args.e, args.force)?)
    } else {
        None
    };

    let mut datasets = Vec::new();
    let mut hashes = Vec::new();
    for entry in &entries {
        let ds = Arc::new(io::load_verified(entry)?);
        hashes.push((entry.name.clone(), io::hash_dataset_file(&entry.path)?));
        datasets.push(ds);
    }

    let mut cells = Vec::new();
    for ds in &datasets {
        let (keep, attempts) = s.keep_attempts(ds.n())?;
        for strategy in &strategies {
            let protocol = build_protocol(
                &ds.name,
                strategy,
                &s,
                query_model.as_deref(),
                task_model.as_deref(),
            )?;
            cells.push(CellSpec {
                dataset: Arc::clone(ds),
                protocol,
                keep,
                attempts,
                timing: s.timing,
                trial_timeout_ms: s.trial_timeout_ms,
                cell_timeout_ms: s.cell_timeout_ms,
                bso: if strategy == "bso" { bso_params } else { None },
                file_tag: None,
            });
        }
    }

    let mut extra = vec![
        (
            "query-model",
            query_model.unwrap_or_else(|| "default".to_string()),
        ),
        (
            "task-model",
            task_model.unwrap_or_else(|| "default".to_string()),
        ),
    ];
    if let Some(p) = &bso_params {
        extra.push(("w", p.w.to_string()));
        extra.push(("e", p.e.to_string()));
        extra.push(("force", p.force.to_string()));
    }
    let manifest = RunManifestParts {
        config: config_snapshot(&s, &extra),
        datasets_hash: io::combine_hashes(&mut hashes),
        strategies: strategies.clone(),
    }
    .build();

    let reports = datasets
        .iter()
        .map(|ds| engine::dataset_report(ds))
        .collect();
    let summary = engine::execute(GridRun {
        out_dir: s.out.clone(),
        manifest,
        datasets: reports,
        cells,
        jobs: s.jobs,
    })?;
    eprintln!(
        "grid complete: {} kept trials, {} cells skipped (already done), {} TLE, {} underfilled",
        summary.kept_trials,
        summary.skipped_cells,
        summary.tle_cells.len(),
        summary.underfilled_cells.len()
    );
    Ok(())
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<(), CliError> {
    let r = Resolver::new(args.config.as_deref())?;
    let results: Vec<PathBuf> = if !args.results.is_empty() {
        args.results.clone()
    } else if let Some(raw) = r.string(None, "results") {
        config::parse_list(&raw)
            .into_iter()
            .map(PathBuf::from)
            .collect()
    } else {
        vec![r.out_dir(None)]
    };
    if results.is_empty() {
        return Err(CliError::Usage(
            "analyze needs at least one --results directory".to_string(),
        ));
    }
    let tables = csvout::parse_tables(r.string(args.tables.as_deref(), "tables").as_deref())?;
    let out = args.out.clone().unwrap_or_else(|| results[0].clone());
    csvout::analyze(&results, &out, &tables)
}

fn cmd_compat(args: CompatArgs) -> Result<(), CliError> {
    let r = Resolver::new(args.shared.config.as_deref())?;
    let s = resolve_shared(&args.shared, &r)?;

    let data = require(
        r.string(path_string(args.data.as_deref()).as_deref(), "data"),
        "--data (or `data` in the config)",
    )?;
    let path = PathBuf::from(data);
    let name = io::dataset_name_from_path(&path);
    let ds = Arc::new(io::load_dataset(&path, &name)?);
    let (keep, attempts) = s.keep_attempts(ds.n())?;

    let models_raw = r
        .string(args.models.as_deref(), "models")
        .unwrap_or_else(|| "lr,svm-rbf,rf".to_string());
    let model_names = config::parse_list(&models_raw);
    if model_names.len() < 2 {
        return Err(CliError::Usage(
            "compat needs at least two models".to_string(),
        ));
    }
    let mut specs = Vec::new();
    let mut display = Vec::new();
    for m in &model_names {
        let spec = config::parse_model(m)?;
        if display.contains(&spec.kind.name().to_string()) {
            return Err(CliError::Usage(format!("model `{m}` appears twice")));
        }
        display.push(spec.kind.name().to_string());
        specs.push(spec);
    }

    // Every grid cell runs the compatible-uncertainty protocol; the
    // strategy name stays `us-c` so its seed streams match a plain run.
    let mut cells = Vec::new();
    for (qi, q) in specs.iter().enumerate() {
        for (ti, t) in specs.iter().enumerate() {
            let mut protocol = build_protocol(&name, "us-c", &s, None, None)?;
            protocol.query_spec = q.clone();
            protocol.task_spec = t.clone();
            cells.push(CellSpec {
                dataset: Arc::clone(&ds),
                protocol,
                keep,
                attempts,
                timing: s.timing,
                trial_timeout_ms: s.trial_timeout_ms,
                cell_timeout_ms: s.cell_timeout_ms,
                bso: None,
                file_tag: Some(format!("{}.{}", display[qi], display[ti])),
            });
        }
    }

    let mut hashes = vec![(name.clone(), io::hash_dataset_file(&path)?)];
    let extra = vec![("models", display.join(","))];
    let manifest = RunManifestParts {
        config: config_snapshot(&s, &extra),
        datasets_hash: io::combine_hashes(&mut hashes),
        strategies: vec!["us-c".to_string()],
    }
    .build();
    let hash = manifest.hash();

    std::fs::create_dir_all(&s.out)
        .map_err(|e| CliError::Other(format!("cannot create {}: {e}", s.out.display())))?;
    if let Some(existing) = io::read_manifest(&s.out)? {
        if existing.hash() != hash {
            return Err(CliError::Mixed(format!(
                "output directory {} holds manifest {}, this compat run is {hash}",
                s.out.display(),
                existing.hash()
            )));
        }
    }
    io::write_manifest(&s.out, &manifest)?;

    let outcomes = engine::run_cells(cells, s.jobs, &mut |out| {
        eprintln!(
            "compat cell {}: kept {} of {} attempted",
            out.file_tag, out.report.kept, out.report.attempted
        );
    });

    let mut means = Vec::new();
    for (i, out) in outcomes.iter().enumerate() {
        let (qi, ti) = (i / specs.len(), i % specs.len());
        let file = s.out.join(format!(
            "compat.{}.{}.jsonl",
            io::sanitize_component(&name),
            io::sanitize_component(&out.file_tag)
        ));
        io::write_jsonl(&file, &out.rows)?;
        if out.report.kept == 0 || out.report.tle || out.report.underfilled {
            continue; // hole in the grid
        }
        let mut by_seed: BTreeMap<u64, Vec<f64>> = BTreeMap::new();
        for row in &out.rows {
            by_seed.entry(row.seed).or_default().push(row.acc);
        }
        let aubcs: Vec<f64> = by_seed.values().map(|accs| stats::aubc(accs)).collect();
        let mean = aubcs.iter().sum::<f64>() / aubcs.len() as f64;
        means.push((display[qi].clone(), display[ti].clone(), mean));
    }

    let grid = stats::compat_matrix(&means, &display);
    let csv = csvout::render_compat(&hash, &name, &grid);
    let csv_path = s
        .out
        .join(format!("compat_{}.csv", io::sanitize_component(&name)));
    io::atomic_write(&csv_path, csv.as_bytes())?;

    eprintln!(
        "compat grid on {name}: diagonal dominates {} of {} columns{}",
        grid.dominance_columns,
        display.len(),
        if grid.holes { " (grid has holes)" } else { "" }
    );
    for (model, deficit) in &grid.deficits {
        eprintln!("  deficit: {model} diagonal trails the column best by {deficit:.6}");
    }
    eprintln!("wrote {}", csv_path.display());
    Ok(())
}

fn cmd_bso(args: BsoArgs) -> Result<(), CliError> {
    cmd_run(RunArgs {
        data: args.data,
        strategy: Some("bso".to_string()),
        query_model: None,
        task_model: args.task_model,
        w: args.w,
        e: args.e,
        force: args.force,
        shared: args.shared,
    })
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Grid(a) => cmd_grid(a),
        Command::Analyze(a) => cmd_analyze(a),
        Command::Compat(a) => cmd_compat(a),
        Command::Bso(a) => cmd_bso(a),
    };
    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
