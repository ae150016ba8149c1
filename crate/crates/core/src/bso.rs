//! Beam-search oracle: an upper-bound query sequence found by expanding
//! labeled sets toward maximal test accuracy. Unlike every strategy, the
//! oracle deliberately reads test labels — its curve is a ceiling, not a
//! contender.

use alloc::string::String;
use alloc::vec::Vec;

use crate::dataset::PoolState;
use crate::error::CoreError;
use crate::learners::{self, LearnerSpec};
use crate::linalg::Matrix;

pub const DEFAULT_W: usize = 5;
pub const DEFAULT_E: usize = 10;
/// Beam search refits the task model per candidate per state per round;
/// past this many dataset rows the cost curve turns hostile.
pub const DEFAULT_POOL_LIMIT: usize = 1600;

#[derive(Debug, Clone)]
pub struct BeamState {
    /// Queried candidates in order (positions into the training matrix).
    pub seq: Vec<usize>,
    /// Sorted labeled positions; the dedupe and tie-break key.
    pub labeled: Vec<usize>,
    /// Sorted remaining candidate positions.
    pub unlabeled: Vec<usize>,
    /// Test accuracy after each acquisition, starting at the initial pool.
    pub trace: Vec<f64>,
    /// Latest test accuracy.
    pub score: f64,
}

#[derive(Debug, Clone)]
pub struct BsoOutcome {
    pub sequence: Vec<usize>,
    pub curve: Vec<f64>,
    /// Set when the time budget ran out and the curve is best-so-far.
    pub truncated: bool,
}

/// Dataset-size gate shared by every oracle entry point.
pub fn check_pool_limit(n: usize, force: bool) -> Result<(), CoreError> {
    if !force && n > DEFAULT_POOL_LIMIT {
        return Err(CoreError::PoolTooLarge {
            n,
            limit: DEFAULT_POOL_LIMIT,
        });
    }
    Ok(())
}

fn fit_and_score(
    x_train: &Matrix,
    y_train: &[f64],
    x_test: &Matrix,
    y_test: &[f64],
    spec: &LearnerSpec,
    labeled: &[usize],
) -> Result<f64, CoreError> {
    let x = x_train.select_rows(labeled);
    let y: Vec<f64> = labeled.iter().map(|&i| y_train[i]).collect();
    let model = learners::train(spec, &x, &y)?;
    Ok(learners::accuracy(&model, x_test, y_test))
}

/// Runs the beam search. Indices in `pool0` are positions into
/// `x_train` rows; the caller owns any mapping back to original ids.
///
/// Per round every beam state is expanded by its top-`e` single-point
/// additions ranked by resulting test accuracy (ties toward the smaller
/// candidate position); the global top-`w` children with pairwise
/// distinct labeled sets survive, ordered by score and then by
/// lexicographically smaller labeled set. `should_stop` is polled
/// between refits; once it fires the best state so far is returned with
/// the truncation flag set.
pub fn bso_run(
    x_train: &Matrix,
    y_train: &[f64],
    x_test: &Matrix,
    y_test: &[f64],
    task_spec: &LearnerSpec,
    pool0: &PoolState,
    budget: usize,
    w: usize,
    e: usize,
    should_stop: &mut dyn FnMut() -> bool,
) -> Result<BsoOutcome, CoreError> {
    assert!(
        w >= 1 && e >= 1,
        "beam width and expansion cap must be positive"
    );
    assert!(
        budget <= pool0.unlabeled.len(),
        "budget cannot exceed the pool"
    );

    let acc0 = fit_and_score(x_train, y_train, x_test, y_test, task_spec, &pool0.labeled)?;
    let root = BeamState {
        seq: Vec::new(),
        labeled: pool0.labeled.clone(),
        unlabeled: pool0.unlabeled.clone(),
        trace: alloc::vec![acc0],
        score: acc0,
    };
    let mut beam = alloc::vec![root];
    let mut truncated = false;

    'rounds: for _ in 0..budget {
        // (child, parent rank, candidate position) for the dedupe order.
        let mut children: Vec<(BeamState, usize, usize)> = Vec::new();
        for (rank, state) in beam.iter().enumerate() {
            let mut expansions: Vec<(f64, usize)> = Vec::new();
            for (ci, &cand) in state.unlabeled.iter().enumerate() {
                if should_stop() {
                    truncated = true;
                    break 'rounds;
                }
                let mut labeled = state.labeled.clone();
                let ins = labeled.binary_search(&cand).unwrap_err();
                labeled.insert(ins, cand);
                let acc = fit_and_score(x_train, y_train, x_test, y_test, task_spec, &labeled)?;
                expansions.push((acc, ci));
            }
            expansions.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)));
            expansions.truncate(e);
            for &(acc, ci) in &expansions {
                let cand = state.unlabeled[ci];
                let mut labeled = state.labeled.clone();
                let ins = labeled.binary_search(&cand).unwrap_err();
                labeled.insert(ins, cand);
                let mut unlabeled = state.unlabeled.clone();
                unlabeled.remove(ci);
                let mut seq = state.seq.clone();
                seq.push(cand);
                let mut trace = state.trace.clone();
                trace.push(acc);
                children.push((
                    BeamState {
                        seq,
                        labeled,
                        unlabeled,
                        trace,
                        score: acc,
                    },
                    rank,
                    ci,
                ));
            }
        }
        // Score-descending, then lexicographically smaller labeled set;
        // identical sets (which always tie on score) keep the child of
        // the better-ranked parent / smaller candidate, then collapse.
        children.sort_by(|a, b| {
            b.0.score
                .partial_cmp(&a.0.score)
                .unwrap()
                .then_with(|| a.0.labeled.cmp(&b.0.labeled))
                .then(a.1.cmp(&b.1))
                .then(a.2.cmp(&b.2))
        });
        children.dedup_by(|a, b| a.0.labeled == b.0.labeled);
        children.truncate(w);
        beam = children.into_iter().map(|(s, _, _)| s).collect();
    }

    let best = beam
        .into_iter()
        .next()
        .expect("beam never empties while the budget is positive");
    Ok(BsoOutcome {
        sequence: best.seq,
        curve: best.trace,
        truncated,
    })
}

/// Human-readable parameter note for run metadata.
pub fn parameter_note(w: usize, e: usize) -> String {
    alloc::format!("bso beam parameters: W={w} E={e} (artifact defaults)")
}
