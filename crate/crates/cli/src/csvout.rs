//! The `analyze` pipeline: collect records and flags from one or more
//! results directories (all stamped with the same manifest), compute
//! the statistics tables, and render CSV/JSON outputs. Flagged cells
//! (TLE or underfilled) appear in the summary with their flags but are
//! excluded from ranking, significance testing, and delta views.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use albench_core::stats::{
    self, CellFlag, CompatGrid, DatasetAttrs, Improvement, SummaryCell, TrialAubc,
};

use crate::io;
use crate::CliError;

pub const ALL_TABLES: [&str; 4] = ["summary", "ranking", "usefulness", "delta"];

/// Parses the `--tables` list; `all` (the default) selects every table.
pub fn parse_tables(raw: Option<&str>) -> Result<Vec<String>, CliError> {
    let raw = raw.unwrap_or("all");
    let mut tables = Vec::new();
    for item in raw.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if item == "all" {
            for t in ALL_TABLES {
                if !tables.iter().any(|x| x == t) {
                    tables.push(t.to_string());
                }
            }
        } else if ALL_TABLES.contains(&item) {
            if !tables.iter().any(|x| x == item) {
                tables.push(item.to_string());
            }
        } else {
            return Err(CliError::Usage(format!(
                "unknown table `{item}`; known: all, {}",
                ALL_TABLES.join(", ")
            )));
        }
    }
    if tables.is_empty() {
        return Err(CliError::Usage("no tables selected".to_string()));
    }
    Ok(tables)
}

/// Everything `analyze` needs, merged across results directories.
pub struct Collected {
    pub manifest_hash: String,
    pub attrs: Vec<DatasetAttrs>,
    /// Per-trial AUBC for every kept trial, flagged cells included.
    pub trials: Vec<TrialAubc>,
    pub flags: Vec<CellFlag>,
}

impl Collected {
    /// Trials from unflagged cells only: the population every ranking,
    /// significance, and delta computation runs on.
    pub fn clean_trials(&self) -> Vec<TrialAubc> {
        let flagged: BTreeSet<(&str, &str)> = self
            .flags
            .iter()
            .map(|f| (f.dataset.as_str(), f.strategy.as_str()))
            .collect();
        self.trials
            .iter()
            .filter(|t| !flagged.contains(&(t.dataset.as_str(), t.strategy.as_str())))
            .cloned()
            .collect()
    }
}

/// Turns one cell's record rows into per-seed AUBC values. Rows must
/// form complete curves: t = 0..len-1 per seed.
fn trials_from_rows(
    dataset: &str,
    strategy: &str,
    rows: &[io::RecordRow],
) -> Result<Vec<TrialAubc>, CliError> {
    let mut by_seed: BTreeMap<u64, Vec<(usize, f64)>> = BTreeMap::new();
    for row in rows {
        if row.dataset != dataset || row.strategy != strategy {
            return Err(CliError::Data(format!(
                "record file for {dataset}/{strategy} holds a row for {}/{}",
                row.dataset, row.strategy
            )));
        }
        by_seed.entry(row.seed).or_default().push((row.t, row.acc));
    }
    let mut out = Vec::new();
    for (seed, mut curve) in by_seed {
        curve.sort_by_key(|(t, _)| *t);
        for (i, (t, _)) in curve.iter().enumerate() {
            if *t != i {
                return Err(CliError::Data(format!(
                    "{dataset}/{strategy} seed {seed}: record stream has a gap at t={i}"
                )));
            }
        }
        let accs: Vec<f64> = curve.into_iter().map(|(_, acc)| acc).collect();
        out.push(TrialAubc {
            dataset: dataset.to_string(),
            strategy: strategy.to_string(),
            seed,
            aubc: stats::aubc(&accs),
        });
    }
    Ok(out)
}

/// Reads manifests, cell reports, and record streams from the given
/// directories. Every directory must carry the same manifest hash;
/// cells present in several directories are read once.
pub fn collect(dirs: &[PathBuf]) -> Result<Collected, CliError> {
    if dirs.is_empty() {
        return Err(CliError::Usage(
            "analyze needs at least one results directory".to_string(),
        ));
    }
    let mut manifest_hash: Option<String> = None;
    let mut attrs: BTreeMap<String, DatasetAttrs> = BTreeMap::new();
    let mut trials = Vec::new();
    let mut flags = Vec::new();
    let mut seen: BTreeSet<(String, String)> = BTreeSet::new();

    for dir in dirs {
        let manifest = io::read_manifest(dir)?.ok_or_else(|| {
            CliError::Data(format!(
                "{}: no manifest.json; not a results directory",
                dir.display()
            ))
        })?;
        let hash = manifest.hash();
        match &manifest_hash {
            None => manifest_hash = Some(hash),
            Some(first) if *first != hash => {
                return Err(CliError::Mixed(format!(
                    "{} carries manifest {hash}, other inputs carry {first}; \
                     analyze refuses to mix runs",
                    dir.display()
                )));
            }
            Some(_) => {}
        }

        let report = io::read_report(dir)?.ok_or_else(|| {
            CliError::Data(format!(
                "{}: no cells.json; the run has not completed",
                dir.display()
            ))
        })?;
        for ds in report.datasets {
            attrs.entry(ds.name.clone()).or_insert(DatasetAttrs {
                name: ds.name,
                d: ds.d,
                n: ds.n,
                imbalance: ds.imbalance,
            });
        }
        for cell in report.cells {
            let key = (cell.dataset.clone(), cell.strategy.clone());
            if !seen.insert(key) {
                continue;
            }
            if cell.tle || cell.underfilled {
                flags.push(CellFlag {
                    dataset: cell.dataset.clone(),
                    strategy: cell.strategy.clone(),
                    tle: cell.tle,
                    underfilled: cell.underfilled,
                });
            }
            let path = io::record_path(dir, &cell.dataset, &cell.strategy);
            if path.exists() {
                let rows = io::read_jsonl(&path)?;
                trials.extend(trials_from_rows(&cell.dataset, &cell.strategy, &rows)?);
            }
        }
    }

    if seen.is_empty() {
        return Err(CliError::Data(
            "the results directories record no cells".to_string(),
        ));
    }
    Ok(Collected {
        manifest_hash: manifest_hash.expect("dirs is nonempty"),
        attrs: attrs.into_values().collect(),
        trials,
        flags,
    })
}

fn fmt6(v: f64) -> String {
    format!("{v:.6}")
}

fn flag_word(tle: bool, underfilled: bool) -> &'static str {
    match (tle, underfilled) {
        (true, true) => "TLE;UNDERFILLED",
        (true, false) => "TLE",
        (false, true) => "UNDERFILLED",
        (false, false) => "",
    }
}

pub fn render_summary(hash: &str, cells: &[SummaryCell]) -> String {
    let mut text = format!("# manifest {hash}\n");
    text.push_str("dataset,strategy,mean_aubc,sd_aubc,n_seeds,flags\n");
    for c in cells {
        let (mean, sd) = if c.count == 0 {
            (String::new(), String::new())
        } else {
            (fmt6(c.mean), fmt6(c.sd))
        };
        text.push_str(&format!(
            "{},{},{},{},{},{}\n",
            c.dataset,
            c.strategy,
            mean,
            sd,
            c.count,
            flag_word(c.tle, c.underfilled)
        ));
    }
    text
}

/// Ranking over clean cells; flagged cells render as literal flag rows
/// so their exclusion is visible in the table itself.
pub fn render_ranking(hash: &str, rows: &[stats::RankRow], flags: &[CellFlag]) -> String {
    let mut text = format!("# manifest {hash}\n");
    text.push_str("dataset,strategy,mean_rank,sd_rank,n_seeds\n");
    for r in rows {
        text.push_str(&format!(
            "{},{},{},{},{}\n",
            r.dataset,
            r.strategy,
            fmt6(r.mean_rank),
            fmt6(r.sd_rank),
            r.n_seeds
        ));
    }
    let mut flags: Vec<&CellFlag> = flags.iter().collect();
    flags.sort_by(|a, b| (&a.dataset, &a.strategy).cmp(&(&b.dataset, &b.strategy)));
    for f in flags {
        text.push_str(&format!(
            "{},{},{},,\n",
            f.dataset,
            f.strategy,
            if f.tle { "TLE" } else { "UNDERFILLED" }
        ));
    }
    text
}

pub fn render_usefulness(hash: &str, imps: &[Improvement]) -> String {
    let mut text = format!("# manifest {hash}\n");
    text.push_str("dataset,strategy,mean_tau,sd_tau,p_value,n_seeds,degenerate,significant_win\n");
    for i in imps {
        text.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            i.dataset,
            i.strategy,
            fmt6(i.mean_tau),
            fmt6(i.sd_tau),
            format_p(i.p),
            i.n_seeds,
            i.degenerate,
            i.significant_win
        ));
    }
    text
}

pub fn render_usefulness_counts(hash: &str, counts: &stats::UsefulnessCounts) -> String {
    let mut text = format!("# manifest {hash}\n");
    text.push_str("axis,name,significant_wins\n");
    for (name, wins) in &counts.per_strategy {
        text.push_str(&format!("strategy,{name},{wins}\n"));
    }
    for (name, wins) in &counts.per_dataset {
        text.push_str(&format!("dataset,{name},{wins}\n"));
    }
    text
}

pub fn render_delta(hash: &str, groups: &[stats::DeltaGroup]) -> String {
    let mut text = format!("# manifest {hash}\n");
    text.push_str("view,strategy,mean_delta,sd_delta,n_datasets\n");
    for g in groups {
        text.push_str(&format!(
            "{},{},{},{},{}\n",
            g.view,
            g.strategy,
            fmt6(g.mean_delta),
            fmt6(g.sd_delta),
            g.n_datasets
        ));
    }
    text
}

/// Small p-values keep full precision; ordinary ones read as decimals.
fn format_p(p: f64) -> String {
    if p != 0.0 && p < 1e-4 {
        format!("{p:.6e}")
    } else {
        fmt6(p)
    }
}

pub fn render_compat(hash: &str, dataset: &str, grid: &CompatGrid) -> String {
    let mut text = format!("# manifest {hash}\n");
    text.push_str(&format!("# dataset {dataset}\n"));
    text.push_str(&format!(
        "# dominance_columns: {} of {}\n",
        grid.dominance_columns,
        grid.models.len()
    ));
    for (model, deficit) in &grid.deficits {
        text.push_str(&format!("# deficit: {model} {}\n", fmt6(*deficit)));
    }
    text.push_str(&format!(
        "# holes: {}\n",
        if grid.holes { "present" } else { "none" }
    ));
    text.push_str(&format!("query_model,{}\n", grid.models.join(",")));
    for (qi, q) in grid.models.iter().enumerate() {
        let cells: Vec<String> = grid.grid[qi]
            .iter()
            .map(|c| c.map(fmt6).unwrap_or_default())
            .collect();
        text.push_str(&format!("{q},{}\n", cells.join(",")));
    }
    text
}

/// Per-dataset Friedman test over the seeds all strategies completed:
/// (dataset, statistic, p, k strategies, n seeds). Datasets without at
/// least two strategies and two common seeds are skipped.
pub fn friedman_by_dataset(trials: &[TrialAubc]) -> Vec<(String, f64, f64, usize, usize)> {
    let mut datasets: BTreeMap<&str, BTreeMap<&str, BTreeMap<u64, f64>>> = BTreeMap::new();
    for t in trials {
        datasets
            .entry(&t.dataset)
            .or_default()
            .entry(&t.strategy)
            .or_default()
            .insert(t.seed, t.aubc);
    }
    let mut out = Vec::new();
    for (dataset, by_strategy) in &datasets {
        if by_strategy.len() < 2 {
            continue;
        }
        let mut common: Option<BTreeSet<u64>> = None;
        for seeds in by_strategy.values() {
            let set: BTreeSet<u64> = seeds.keys().copied().collect();
            common = Some(match common {
                None => set,
                Some(prev) => prev.intersection(&set).copied().collect(),
            });
        }
        let common = common.unwrap_or_default();
        if common.len() < 2 {
            continue;
        }
        let matrix: Vec<Vec<f64>> = by_strategy
            .values()
            .map(|seeds| common.iter().map(|s| seeds[s]).collect())
            .collect();
        let (stat, p) = stats::friedman_test(&matrix);
        out.push((
            dataset.to_string(),
            stat,
            p,
            by_strategy.len(),
            common.len(),
        ));
    }
    out
}

fn analysis_json(
    collected: &Collected,
    cells: &[SummaryCell],
    ranking: &[stats::RankRow],
    friedman: &[(String, f64, f64, usize, usize)],
    imps: &[Improvement],
    counts: &stats::UsefulnessCounts,
    delta_rows: &[stats::DeltaRow],
    delta_groups: &[stats::DeltaGroup],
) -> serde_json::Value {
    serde_json::json!({
        "manifest_hash": collected.manifest_hash,
        "datasets": collected.attrs.iter().map(|a| serde_json::json!({
            "name": a.name,
            "n": a.n,
            "d": a.d,
            "imbalance": a.imbalance,
            "tags": [a.dim_tag(), a.size_tag(), a.balance_tag()],
        })).collect::<Vec<_>>(),
        "summary": cells.iter().map(|c| serde_json::json!({
            "dataset": c.dataset,
            "strategy": c.strategy,
            "mean_aubc": c.mean,
            "sd_aubc": c.sd,
            "n_seeds": c.count,
            "tle": c.tle,
            "underfilled": c.underfilled,
        })).collect::<Vec<_>>(),
        "ranking": ranking.iter().map(|r| serde_json::json!({
            "dataset": r.dataset,
            "strategy": r.strategy,
            "mean_rank": r.mean_rank,
            "sd_rank": r.sd_rank,
            "n_seeds": r.n_seeds,
        })).collect::<Vec<_>>(),
        "friedman": friedman.iter().map(|(ds, stat, p, k, n)| serde_json::json!({
            "dataset": ds,
            "statistic": stat,
            "p": p,
            "k_strategies": k,
            "n_seeds": n,
        })).collect::<Vec<_>>(),
        "improvements": imps.iter().map(|i| serde_json::json!({
            "dataset": i.dataset,
            "strategy": i.strategy,
            "mean_tau": i.mean_tau,
            "sd_tau": i.sd_tau,
            "p": i.p,
            "n_seeds": i.n_seeds,
            "degenerate": i.degenerate,
            "significant_win": i.significant_win,
        })).collect::<Vec<_>>(),
        "usefulness_counts": {
            "per_strategy": counts.per_strategy,
            "per_dataset": counts.per_dataset,
        },
        "delta": {
            "rows": delta_rows.iter().map(|r| serde_json::json!({
                "dataset": r.dataset,
                "strategy": r.strategy,
                "delta": r.delta,
                "best_includes_oracle": r.best_includes_oracle,
            })).collect::<Vec<_>>(),
            "groups": delta_groups.iter().map(|g| serde_json::json!({
                "view": g.view,
                "strategy": g.strategy,
                "mean_delta": g.mean_delta,
                "sd_delta": g.sd_delta,
                "n_datasets": g.n_datasets,
            })).collect::<Vec<_>>(),
        },
    })
}

/// Runs the whole analysis: collect, compute, and write the requested
/// tables plus `analysis.json` into `out`.
pub fn analyze(results: &[PathBuf], out: &Path, tables: &[String]) -> Result<(), CliError> {
    let collected = collect(results)?;
    let hash = collected.manifest_hash.clone();
    let clean = collected.clean_trials();

    let cells = stats::summarize(&collected.trials, &collected.flags);
    let ranking = stats::rank_table(&clean);
    let friedman = friedman_by_dataset(&clean);
    let imps = stats::improvements(&clean);
    let counts = stats::usefulness_counts(&imps);
    let (delta_rows, delta_groups) = stats::delta_views(&cells, &collected.attrs);

    std::fs::create_dir_all(out)
        .map_err(|e| CliError::Other(format!("cannot create {}: {e}", out.display())))?;
    for table in tables {
        let (name, text) = match table.as_str() {
            "summary" => ("summary.csv", render_summary(&hash, &cells)),
            "ranking" => (
                "ranking.csv",
                render_ranking(&hash, &ranking, &collected.flags),
            ),
            "usefulness" => ("usefulness.csv", render_usefulness(&hash, &imps)),
            "delta" => ("delta_views.csv", render_delta(&hash, &delta_groups)),
            other => return Err(CliError::Usage(format!("unknown table `{other}`"))),
        };
        io::atomic_write(&out.join(name), text.as_bytes())?;
        eprintln!("wrote {}", out.join(name).display());
        if table == "usefulness" {
            let counts_text = render_usefulness_counts(&hash, &counts);
            io::atomic_write(&out.join("usefulness_counts.csv"), counts_text.as_bytes())?;
            eprintln!("wrote {}", out.join("usefulness_counts.csv").display());
        }
    }
    let json = analysis_json(
        &collected,
        &cells,
        &ranking,
        &friedman,
        &imps,
        &counts,
        &delta_rows,
        &delta_groups,
    );
    let pretty = serde_json::to_string_pretty(&json)
        .map_err(|e| CliError::Other(format!("cannot serialize analysis: {e}")))?;
    io::atomic_write(&out.join("analysis.json"), pretty.as_bytes())?;
    eprintln!("wrote {}", out.join("analysis.json").display());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::{CellReport, DatasetReport, RecordRow, RunManifest, RunReport};
    use std::collections::BTreeMap;

    fn row(ds: &str, strat: &str, seed: u64, t: usize, acc: f64) -> RecordRow {
        RecordRow {
            dataset: ds.to_string(),
            strategy: strat.to_string(),
            seed,
            t,
            queried: if t == 0 { -1 } else { t as i64 },
            n_labeled: 20 + t,
            acc,
            wall_ms: 0,
        }
    }

    fn manifest() -> RunManifest {
        RunManifest::new(
            BTreeMap::from([("budget".to_string(), "2".to_string())]),
            "h".to_string(),
            vec!["uniform".to_string(), "us-c".to_string()],
        )
    }

    fn write_fixture_dir(dir: &Path, tle_cell: bool) {
        std::fs::create_dir_all(dir).unwrap();
        io::write_manifest(dir, &manifest()).unwrap();
        let mut cells = vec![
            CellReport {
                dataset: "a".to_string(),
                strategy: "uniform".to_string(),
                kept: 2,
                attempted: 2,
                tle: false,
                underfilled: false,
                statuses: vec![(0, "DONE".to_string()), (1, "DONE".to_string())],
                notes: vec![],
            },
            CellReport {
                dataset: "a".to_string(),
                strategy: "us-c".to_string(),
                kept: 2,
                attempted: 2,
                tle: false,
                underfilled: false,
                statuses: vec![(0, "DONE".to_string()), (1, "DONE".to_string())],
                notes: vec![],
            },
        ];
        if tle_cell {
            cells.push(CellReport {
                dataset: "a".to_string(),
                strategy: "eer".to_string(),
                kept: 0,
                attempted: 1,
                tle: true,
                underfilled: true,
                statuses: vec![(0, "TLE".to_string())],
                notes: vec![],
            });
        }
        let report = RunReport {
            manifest_hash: manifest().hash(),
            datasets: vec![DatasetReport {
                name: "a".to_string(),
                n: 40,
                d: 2,
                imbalance: 1.0,
            }],
            cells,
        };
        io::write_report(dir, &report).unwrap();
        io::write_jsonl(
            &io::record_path(dir, "a", "uniform"),
            &[
                row("a", "uniform", 0, 0, 0.5),
                row("a", "uniform", 0, 1, 0.7),
                row("a", "uniform", 1, 0, 0.5),
                row("a", "uniform", 1, 1, 0.5),
            ],
        )
        .unwrap();
        io::write_jsonl(
            &io::record_path(dir, "a", "us-c"),
            &[
                row("a", "us-c", 0, 0, 0.5),
                row("a", "us-c", 0, 1, 0.9),
                row("a", "us-c", 1, 0, 0.5),
                row("a", "us-c", 1, 1, 0.7),
            ],
        )
        .unwrap();
        if tle_cell {
            io::write_jsonl(&io::record_path(dir, "a", "eer"), &[]).unwrap();
        }
    }

    fn temp_dir(tag: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("albench-csv-{tag}-{}", std::process::id()));
        let _ = std::fs::remove_dir_all(&dir);
        dir
    }

    #[test]
    fn collect_builds_trial_aubcs_and_flags() {
        let dir = temp_dir("collect");
        write_fixture_dir(&dir, true);
        let got = collect(std::slice::from_ref(&dir)).unwrap();
        assert_eq!(got.manifest_hash, manifest().hash());
        assert_eq!(got.trials.len(), 4);
        let uniform0 = got
            .trials
            .iter()
            .find(|t| t.strategy == "uniform" && t.seed == 0)
            .unwrap();
        assert!((uniform0.aubc - 0.6).abs() < 1e-15);
        assert_eq!(got.flags.len(), 1);
        assert_eq!(got.flags[0].strategy, "eer");
        // eer is flagged, so clean trials drop nothing here (it kept 0),
        // and both real strategies survive.
        assert_eq!(got.clean_trials().len(), 4);
        let _ = std::fs::remove_dir_all(&dir);
    }

    #[test]
    fn collect_refuses_mixed_manifests() {
        let dir1 = temp_dir("mix1");
        let dir2 = temp_dir("mix2");
        write_fixture_dir(&dir1, false);
        write_fixture_dir(&dir2, false);
        let mut other = manifest();
        other.config.insert("budget".to_string(), "9".to_string());
        io::write_manifest(&dir2, &other).unwrap();
        match collect(&[dir1.clone(), dir2.clone()]) {
            Err(CliError::Mixed(_)) => {}
            other => panic!("expected Mixed, got {:?}", other.err()),
        }
        let _ = std::fs::remove_dir_all(&dir1);
        let _ = std::fs::remove_dir_all(&dir2);
    }

    #[test]
    fn analyze_writes_all_tables_with_the_manifest_stamp() {
        let dir = temp_dir("analyze");
        write_fixture_dir(&dir, true);
        let out = temp_dir("analyze-out");
        let tables = parse_tables(Some("all")).unwrap();
        analyze(std::slice::from_ref(&dir), &out, &tables).unwrap();

        let stamp = format!("# manifest {}", manifest().hash());
        for name in [
            "summary.csv",
            "ranking.csv",
            "usefulness.csv",
            "usefulness_counts.csv",
            "delta_views.csv",
        ] {
            let text = std::fs::read_to_string(out.join(name)).unwrap();
            assert!(
                text.starts_with(&stamp),
                "{name} must start with the manifest stamp"
            );
        }

        let summary = std::fs::read_to_string(out.join("summary.csv")).unwrap();
        assert!(
            summary.contains("a,eer,,,0,TLE;UNDERFILLED"),
            "flagged cell row:\n{summary}"
        );
        assert!(
            summary.contains("a,us-c,0.650000,"),
            "us-c mean over [0.7, 0.6]:\n{summary}"
        );

        let ranking = std::fs::read_to_string(out.join("ranking.csv")).unwrap();
        assert!(
            ranking.contains("a,eer,TLE,,"),
            "literal TLE row:\n{ranking}"
        );
        assert!(
            ranking.contains("a,us-c,1.000000,"),
            "us-c wins both seeds:\n{ranking}"
        );

        let usefulness = std::fs::read_to_string(out.join("usefulness.csv")).unwrap();
        assert!(usefulness.contains("a,us-c,"));
        assert!(
            !usefulness.contains("a,eer,"),
            "flagged cell must not be tested"
        );

        let json: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(out.join("analysis.json")).unwrap())
                .unwrap();
        assert_eq!(json["manifest_hash"], manifest().hash());
        assert_eq!(json["friedman"][0]["dataset"], "a");
        assert_eq!(json["friedman"][0]["k_strategies"], 2);
        assert!(json["summary"].as_array().unwrap().len() >= 3);

        let _ = std::fs::remove_dir_all(&dir);
        let _ = std::fs::remove_dir_all(&out);
    }

    #[test]
    fn tables_parse_and_reject_unknowns() {
        assert_eq!(
            parse_tables(None).unwrap(),
            ALL_TABLES.map(String::from).to_vec()
        );
        assert_eq!(
            parse_tables(Some("summary, delta")).unwrap(),
            vec!["summary", "delta"]
        );
        assert!(matches!(
            parse_tables(Some("bogus")),
            Err(CliError::Usage(_))
        ));
    }

    #[test]
    fn compat_rendering_marks_dominance_and_deficits() {
        let models = vec!["LR".to_string(), "RF".to_string()];
        let cells = vec![
            ("LR".to_string(), "LR".to_string(), 0.9),
            ("LR".to_string(), "RF".to_string(), 0.85),
            ("RF".to_string(), "LR".to_string(), 0.8),
            ("RF".to_string(), "RF".to_string(), 0.84),
        ];
        let grid = stats::compat_matrix(&cells, &models);
        let text = render_compat("deadbeef", "toy", &grid);
        assert!(text.contains("# dominance_columns: 1 of 2"));
        assert!(text.contains("# deficit: RF 0.010000"));
        assert!(text.contains("# holes: none"));
        assert!(text.contains("query_model,LR,RF"));
        assert!(text.contains("LR,0.900000,0.850000"));
    }
}
