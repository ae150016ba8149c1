//! The per-trial protocol: split, standardize, draw the initial pool,
//! then loop query → reveal label → refit → record until the budget is
//! spent. All randomness is derived from (base seed, dataset, strategy,
//! trial seed) counter streams, so trials are independent, reproducible,
//! and share splits across strategies for paired comparisons.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::bso;
use crate::dataset::{self, Dataset};
use crate::error::CoreError;
use crate::learners::{self, LearnerSpec, Model};
use crate::linalg::Matrix;
use crate::rng::{hash64, rng_from, shared_stream_seed, trial_stream_seed};
use crate::scaler;
use crate::strategies::{self, StrategyContext};

pub const DEFAULT_TEST_FRACTION: f64 = 0.4;
pub const DEFAULT_INIT_LABELED: usize = 20;

#[derive(Debug, Clone)]
pub struct ProtocolConfig {
    pub dataset: String,
    pub strategy: String,
    pub query_spec: LearnerSpec,
    pub task_spec: LearnerSpec,
    pub test_fraction: f64,
    pub init_labeled: usize,
    /// None runs the full budget T = |D_u at t=0|.
    pub budget: Option<usize>,
    pub base_seed: u64,
    pub batch: usize,
}

impl ProtocolConfig {
    pub fn new(dataset: &str, strategy: &str) -> ProtocolConfig {
        ProtocolConfig {
            dataset: dataset.to_string(),
            strategy: strategy.to_string(),
            query_spec: strategies::default_query_spec(strategy),
            task_spec: LearnerSpec::default_model(),
            test_fraction: DEFAULT_TEST_FRACTION,
            init_labeled: DEFAULT_INIT_LABELED,
            budget: None,
            base_seed: 0,
            batch: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TrialStatus {
    Done,
    ColdStart,
    Tle,
    ModuleError(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub t: usize,
    /// Original dataset row of the queried example; None at t = 0.
    pub queried: Option<usize>,
    pub n_labeled: usize,
    pub acc: f64,
    pub wall_ms: u64,
}

#[derive(Debug, Clone)]
pub struct TrialOutcome {
    pub status: TrialStatus,
    pub records: Vec<TrialRecord>,
    pub notes: Vec<String>,
}

impl TrialOutcome {
    fn failed(status: TrialStatus) -> TrialOutcome {
        TrialOutcome {
            status,
            records: Vec::new(),
            notes: Vec::new(),
        }
    }
}

fn single_class(y: &[f64]) -> bool {
    let pos = y.iter().any(|&v| v > 0.0);
    let neg = y.iter().any(|&v| v < 0.0);
    !(pos && neg)
}

fn round_seed(stream: u64, t: usize) -> u64 {
    hash64(&[&stream.to_le_bytes(), &(t as u64).to_le_bytes()])
}

/// Split, standardized features, and initial pool for one seeded trial.
/// Shared by the strategy loop and the oracle driver so both observe the
/// identical protocol state for a given (config, dataset, trial seed).
pub struct TrialSetup {
    pub split: dataset::DataSplit,
    pub x_tr: Matrix,
    pub x_te: Matrix,
    pub y_tr: Vec<f64>,
    pub y_te: Vec<f64>,
    pub pool: dataset::PoolState,
    /// Full budget: the unlabeled pool size at t = 0.
    pub t_full: usize,
}

/// Performs split -> standardize -> initial pool. The split and the
/// initial pool draw from strategy-independent seed streams, so every
/// strategy (and the oracle) sees the same data layout per trial seed.
pub fn prepare_trial(
    cfg: &ProtocolConfig,
    ds: &Dataset,
    trial_seed: u64,
) -> Result<TrialSetup, TrialStatus> {
    let split = dataset::split_train_test(
        ds.n(),
        cfg.test_fraction,
        &mut rng_from(shared_stream_seed(
            cfg.base_seed,
            &cfg.dataset,
            trial_seed,
            "split",
        )),
    );
    let mut x_tr = ds.x.select_rows(&split.train_idx);
    let mut x_te = ds.x.select_rows(&split.test_idx);
    let y_tr: Vec<f64> = split.train_idx.iter().map(|&i| ds.y[i]).collect();
    let y_te: Vec<f64> = split.test_idx.iter().map(|&i| ds.y[i]).collect();
    if single_class(&y_tr) || single_class(&y_te) {
        return Err(TrialStatus::ColdStart);
    }
    scaler::standardize(&mut x_tr, &mut x_te);

    let positions: Vec<usize> = (0..x_tr.rows()).collect();
    let pool = match dataset::init_pool(
        &positions,
        &y_tr,
        cfg.init_labeled,
        &mut rng_from(shared_stream_seed(
            cfg.base_seed,
            &cfg.dataset,
            trial_seed,
            "init",
        )),
    ) {
        Ok(p) => p,
        Err(CoreError::ColdStart) => return Err(TrialStatus::ColdStart),
        Err(e) => return Err(TrialStatus::ModuleError(e.to_string())),
    };
    let t_full = pool.unlabeled.len();
    Ok(TrialSetup {
        split,
        x_tr,
        x_te,
        y_tr,
        y_te,
        pool,
        t_full,
    })
}

/// Runs one seeded trial. `clock` reports elapsed milliseconds for the
/// records and the time limit; injecting it keeps the loop testable and
/// lets a run trade wall-time fidelity for byte-identical outputs.
pub fn run_trial(
    cfg: &ProtocolConfig,
    ds: &Dataset,
    trial_seed: u64,
    clock: &mut dyn FnMut() -> u64,
    timeout_ms: Option<u64>,
) -> TrialOutcome {
    // The oracle is driven by its own runner: it peeks at test labels,
    // which this loop exists to prevent.
    if cfg.strategy == "bso" {
        return TrialOutcome::failed(TrialStatus::ModuleError(
            "bso runs through the oracle driver, not the trial loop".to_string(),
        ));
    }
    let mut strat = match strategies::make(&cfg.strategy) {
        Some(s) => s,
        None => {
            return TrialOutcome::failed(TrialStatus::ModuleError(alloc::format!(
                "unknown strategy: {}",
                cfg.strategy
            )))
        }
    };

    let setup = match prepare_trial(cfg, ds, trial_seed) {
        Ok(s) => s,
        Err(status) => return TrialOutcome::failed(status),
    };
    let TrialSetup {
        split,
        x_tr,
        x_te,
        y_tr,
        y_te,
        mut pool,
        t_full,
    } = setup;
    let budget = cfg.budget.unwrap_or(t_full).min(t_full);

    // Task-model fit seeds are strategy-independent so every strategy
    // lands on the identical final model once D_l = D_tr; the query
    // model and the strategy's own stream stay strategy-keyed.
    let task_fit_stream = shared_stream_seed(cfg.base_seed, &cfg.dataset, trial_seed, "task-fit");
    let query_fit_stream = trial_stream_seed(
        cfg.base_seed,
        &cfg.dataset,
        &cfg.strategy,
        trial_seed,
        "query-fit",
    );
    let mut strategy_rng = rng_from(trial_stream_seed(
        cfg.base_seed,
        &cfg.dataset,
        &cfg.strategy,
        trial_seed,
        "strategy",
    ));

    let mut records = Vec::with_capacity(budget + 1);
    let mut notes = Vec::new();

    let fit_task = |pool_labeled: &[usize], t: usize| -> Result<(Model, f64), CoreError> {
        let spec = cfg
            .task_spec
            .clone()
            .with_seed(round_seed(task_fit_stream, t));
        let x = x_tr.select_rows(pool_labeled);
        let y: Vec<f64> = pool_labeled.iter().map(|&i| y_tr[i]).collect();
        let model = learners::train(&spec, &x, &y)?;
        let acc = learners::accuracy(&model, &x_te, &y_te);
        Ok((model, acc))
    };

    let (mut task_model, acc0) = match fit_task(&pool.labeled, 0) {
        Ok(v) => v,
        Err(e) => return TrialOutcome::failed(TrialStatus::ModuleError(e.to_string())),
    };
    records.push(TrialRecord {
        t: 0,
        queried: None,
        n_labeled: pool.labeled.len(),
        acc: acc0,
        wall_ms: clock(),
    });

    let mut status = TrialStatus::Done;
    for t in 1..=budget {
        if let Some(limit) = timeout_ms {
            if clock() > limit {
                status = TrialStatus::Tle;
                break;
            }
        }

        let x_l = x_tr.select_rows(&pool.labeled);
        let y_l: Vec<f64> = pool.labeled.iter().map(|&i| y_tr[i]).collect();
        let x_u = x_tr.select_rows(&pool.unlabeled);
        let query_spec = cfg
            .query_spec
            .clone()
            .with_seed(round_seed(query_fit_stream, t));
        let ctx = StrategyContext {
            x_labeled: &x_l,
            y_labeled: &y_l,
            labeled_idx: &pool.labeled,
            x_unlabeled: &x_u,
            unlabeled_idx: &pool.unlabeled,
            query_spec: &query_spec,
            task_spec: &cfg.task_spec,
            task_model: Some(&task_model),
            batch: cfg.batch,
        };
        let picked = match strat.select(&ctx, &mut strategy_rng) {
            Ok(p) => p,
            Err(e) => {
                status = TrialStatus::ModuleError(e.to_string());
                break;
            }
        };
        if let Some(note) = strat.take_note() {
            notes.push(alloc::format!("seed {trial_seed} t {t}: {note}"));
        }
        if pool.unlabeled.binary_search(&picked).is_err() {
            status = TrialStatus::ModuleError(alloc::format!(
                "strategy returned a non-candidate index {picked}"
            ));
            break;
        }

        // The label oracle: reveal y for the queried example only.
        pool.move_to_labeled(picked);

        match fit_task(&pool.labeled, t) {
            Ok((model, acc)) => {
                task_model = model;
                records.push(TrialRecord {
                    t,
                    queried: Some(split.train_idx[picked]),
                    n_labeled: pool.labeled.len(),
                    acc,
                    wall_ms: clock(),
                });
            }
            Err(e) => {
                status = TrialStatus::ModuleError(e.to_string());
                break;
            }
        }
    }

    TrialOutcome {
        status,
        records,
        notes,
    }
}

/// Runs the beam-search oracle on the same protocol state a strategy
/// trial would see (identical split, standardization, initial pool,
/// budget, and t = 0 task-fit seed) and emits the same record schema.
///
/// The oracle gets one fixed task-fit seed: its candidate scores must be
/// a pure function of the labeled set, or the beam comparison would be
/// noise for seeded learners.
#[allow(clippy::too_many_arguments)]
pub fn run_bso_trial(
    cfg: &ProtocolConfig,
    ds: &Dataset,
    trial_seed: u64,
    w: usize,
    e: usize,
    force: bool,
    clock: &mut dyn FnMut() -> u64,
    timeout_ms: Option<u64>,
) -> TrialOutcome {
    if let Err(err) = bso::check_pool_limit(ds.n(), force) {
        return TrialOutcome::failed(TrialStatus::ModuleError(err.to_string()));
    }
    let setup = match prepare_trial(cfg, ds, trial_seed) {
        Ok(s) => s,
        Err(status) => return TrialOutcome::failed(status),
    };
    let budget = cfg.budget.unwrap_or(setup.t_full).min(setup.t_full);
    let m = setup.pool.labeled.len();
    let task_fit_stream = shared_stream_seed(cfg.base_seed, &cfg.dataset, trial_seed, "task-fit");
    let task_spec = cfg
        .task_spec
        .clone()
        .with_seed(round_seed(task_fit_stream, 0));

    let result = {
        let mut stop = || matches!(timeout_ms, Some(limit) if clock() > limit);
        bso::bso_run(
            &setup.x_tr,
            &setup.y_tr,
            &setup.x_te,
            &setup.y_te,
            &task_spec,
            &setup.pool,
            budget,
            w,
            e,
            &mut stop,
        )
    };
    let outcome = match result {
        Ok(o) => o,
        Err(e) => return TrialOutcome::failed(TrialStatus::ModuleError(e.to_string())),
    };

    let mut records = Vec::with_capacity(outcome.curve.len());
    for (t, &acc) in outcome.curve.iter().enumerate() {
        records.push(TrialRecord {
            t,
            queried: if t == 0 {
                None
            } else {
                Some(setup.split.train_idx[outcome.sequence[t - 1]])
            },
            n_labeled: m + t,
            acc,
            wall_ms: clock(),
        });
    }
    let status = if outcome.truncated {
        TrialStatus::Tle
    } else {
        TrialStatus::Done
    };
    TrialOutcome {
        status,
        records,
        notes: alloc::vec![bso::parameter_note(w, e)],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;
    use crate::rng::uniform_f64;

    fn blob_dataset(seed: u64, n: usize) -> Dataset {
        let mut rng = rng_from(seed);
        let mut rows = Vec::new();
        let mut y = Vec::new();
        for i in 0..n {
            let class = if i % 2 == 0 { 1.0 } else { -1.0 };
            rows.push(alloc::vec![
                1.5 * class + 2.0 * (uniform_f64(&mut rng) - 0.5),
                2.0 * (uniform_f64(&mut rng) - 0.5),
            ]);
            y.push(class);
        }
        Dataset {
            name: alloc::format!("blob{n}"),
            x: Matrix::from_rows(&rows),
            y,
        }
    }

    fn zero_clock() -> impl FnMut() -> u64 {
        || 0
    }

    fn small_cfg(strategy: &str) -> ProtocolConfig {
        let mut cfg = ProtocolConfig::new("blob50", strategy);
        cfg.init_labeled = 10;
        cfg
    }

    #[test]
    fn record_stream_has_budget_plus_one_rows() {
        let ds = blob_dataset(1, 50);
        let cfg = small_cfg("uniform");
        let out = run_trial(&cfg, &ds, 0, &mut zero_clock(), None);
        assert_eq!(out.status, TrialStatus::Done);
        // test 20, train 30, init 10 -> T = 20.
        assert_eq!(out.records.len(), 21);
        for (t, r) in out.records.iter().enumerate() {
            assert_eq!(r.t, t);
            assert_eq!(r.n_labeled, 10 + t);
            assert!((0.0..=1.0).contains(&r.acc));
            assert_eq!(r.queried.is_none(), t == 0);
        }
    }

    #[test]
    fn reruns_are_identical() {
        let ds = blob_dataset(2, 40);
        let mut cfg = small_cfg("us-c");
        cfg.budget = Some(6);
        let a = run_trial(&cfg, &ds, 3, &mut zero_clock(), None);
        let b = run_trial(&cfg, &ds, 3, &mut zero_clock(), None);
        assert_eq!(a.status, TrialStatus::Done);
        assert_eq!(a.records, b.records);
    }

    #[test]
    fn queried_rows_are_unique_train_members_never_repeated() {
        let ds = blob_dataset(3, 44);
        let cfg = small_cfg("graph");
        let out = run_trial(&cfg, &ds, 1, &mut zero_clock(), None);
        assert_eq!(out.status, TrialStatus::Done);
        let mut seen = Vec::new();
        for r in &out.records[1..] {
            let q = r.queried.unwrap();
            assert!(q < 44);
            assert!(!seen.contains(&q), "row {q} queried twice");
            seen.push(q);
        }
    }

    #[test]
    fn final_accuracy_is_strategy_invariant() {
        // Same (dataset, seed) exhausts the same training pool, so the
        // last refit must coincide — including for the seeded forest,
        // whose fit seeds are drawn from the strategy-independent stream.
        let ds = blob_dataset(4, 36);
        for task in [LearnerSpec::default_model(), LearnerSpec::rf(15)] {
            let mut accs = Vec::new();
            for strategy in ["uniform", "us-c", "coreset"] {
                let mut cfg = small_cfg(strategy);
                cfg.task_spec = task.clone();
                let out = run_trial(&cfg, &ds, 2, &mut zero_clock(), None);
                assert_eq!(out.status, TrialStatus::Done, "{strategy}");
                accs.push(out.records.last().unwrap().acc);
            }
            assert_eq!(accs[0], accs[1]);
            assert_eq!(accs[0], accs[2]);
        }
    }

    #[test]
    fn single_class_splits_cold_start() {
        // One positive among fifty: whichever side of the split gets it,
        // the other side is single-class.
        let mut ds = blob_dataset(5, 50);
        for v in ds.y.iter_mut() {
            *v = -1.0;
        }
        ds.y[7] = 1.0;
        let cfg = small_cfg("uniform");
        let out = run_trial(&cfg, &ds, 0, &mut zero_clock(), None);
        assert_eq!(out.status, TrialStatus::ColdStart);
        assert!(out.records.is_empty());
    }

    #[test]
    fn timeout_marks_tle_and_keeps_partial_records() {
        let ds = blob_dataset(6, 40);
        let cfg = small_cfg("uniform");
        let mut ticks = 0u64;
        let mut clock = || {
            ticks += 10;
            ticks
        };
        let out = run_trial(&cfg, &ds, 0, &mut clock, Some(45));
        assert_eq!(out.status, TrialStatus::Tle);
        assert!(!out.records.is_empty());
        assert!(out.records.len() < 17, "must stop well short of the budget");
    }

    #[test]
    fn unknown_strategy_is_a_module_error() {
        let ds = blob_dataset(7, 30);
        let cfg = small_cfg("nope");
        let out = run_trial(&cfg, &ds, 0, &mut zero_clock(), None);
        assert_eq!(
            out.status,
            TrialStatus::ModuleError("unknown strategy: nope".to_string())
        );
    }

    #[test]
    fn strategy_error_is_a_module_error() {
        let ds = blob_dataset(8, 30);
        let mut cfg = small_cfg("mcm");
        cfg.query_spec = LearnerSpec::lr(0.1);
        let out = run_trial(&cfg, &ds, 0, &mut zero_clock(), None);
        match out.status {
            TrialStatus::ModuleError(msg) => {
                assert!(msg.contains("invalid configuration"), "{msg}")
            }
            other => panic!("expected ModuleError, got {other:?}"),
        }
        assert_eq!(out.records.len(), 1, "the t=0 record is kept");
    }

    #[test]
    fn bso_is_rejected_by_the_trial_loop() {
        let ds = blob_dataset(9, 30);
        let cfg = small_cfg("bso");
        let out = run_trial(&cfg, &ds, 0, &mut zero_clock(), None);
        match out.status {
            TrialStatus::ModuleError(msg) => assert!(msg.contains("oracle driver")),
            other => panic!("expected ModuleError, got {other:?}"),
        }
    }

    #[test]
    fn splits_are_shared_across_strategies() {
        // t=0 accuracy depends only on (dataset, seed): identical initial
        // pools and splits for every strategy.
        let ds = blob_dataset(10, 40);
        let a = run_trial(&small_cfg("uniform"), &ds, 5, &mut zero_clock(), None);
        let b = run_trial(&small_cfg("qbc"), &ds, 5, &mut zero_clock(), None);
        assert_eq!(a.records[0], b.records[0]);
    }

    #[test]
    fn bso_driver_shares_the_trial_state() {
        // Same split + initial pool + t=0 fit seed as a strategy trial:
        // the first record must match exactly.
        let ds = blob_dataset(11, 40);
        let mut cfg = small_cfg("uniform");
        cfg.budget = Some(3);
        let plain = run_trial(&cfg, &ds, 2, &mut zero_clock(), None);
        cfg.strategy = "bso".to_string();
        let oracle = run_bso_trial(&cfg, &ds, 2, 2, 3, false, &mut zero_clock(), None);
        assert_eq!(oracle.status, TrialStatus::Done);
        assert_eq!(plain.records[0], oracle.records[0]);
        assert_eq!(oracle.records.len(), 4);
        for (t, r) in oracle.records.iter().enumerate() {
            assert_eq!(r.t, t);
            assert_eq!(r.n_labeled, 10 + t);
        }
        // Queried rows are distinct members of the original dataset.
        let mut seen = Vec::new();
        for r in &oracle.records[1..] {
            let q = r.queried.unwrap();
            assert!(q < ds.n());
            assert!(!seen.contains(&q));
            seen.push(q);
        }
        assert!(oracle.notes[0].contains("beam"));
    }

    #[test]
    fn bso_driver_is_deterministic() {
        let ds = blob_dataset(12, 36);
        let mut cfg = small_cfg("bso");
        cfg.budget = Some(4);
        let a = run_bso_trial(&cfg, &ds, 1, 2, 2, false, &mut zero_clock(), None);
        let b = run_bso_trial(&cfg, &ds, 1, 2, 2, false, &mut zero_clock(), None);
        assert_eq!(a.status, TrialStatus::Done);
        assert_eq!(a.records, b.records);
    }

    #[test]
    fn bso_driver_enforces_the_pool_gate() {
        let ds = blob_dataset(13, 1601);
        let cfg = small_cfg("bso");
        let out = run_bso_trial(&cfg, &ds, 0, 1, 1, false, &mut zero_clock(), None);
        match out.status {
            TrialStatus::ModuleError(msg) => assert!(msg.contains("exceeds limit"), "{msg}"),
            other => panic!("expected ModuleError, got {other:?}"),
        }
    }

    #[test]
    fn bso_driver_cold_starts_like_the_loop() {
        let mut ds = blob_dataset(14, 30);
        for v in ds.y.iter_mut() {
            *v = 1.0;
        }
        let cfg = small_cfg("bso");
        let out = run_bso_trial(&cfg, &ds, 0, 2, 2, false, &mut zero_clock(), None);
        assert_eq!(out.status, TrialStatus::ColdStart);
    }

    #[test]
    fn bso_driver_times_out_to_tle() {
        let ds = blob_dataset(15, 40);
        let mut cfg = small_cfg("bso");
        cfg.budget = Some(5);
        let mut ms = 0u64;
        let mut ticking = move || {
            ms += 1;
            ms
        };
        let out = run_bso_trial(&cfg, &ds, 0, 2, 2, false, &mut ticking, Some(3));
        assert_eq!(out.status, TrialStatus::Tle);
        assert!(out.records.len() < 6, "partial curve expected");
        assert!(!out.records.is_empty(), "best-so-far trace is kept");
    }
}
