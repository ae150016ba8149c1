//! Query strategies behind one selection interface.
//!
//! Every strategy consumes a [`StrategyContext`] plus the trial RNG and
//! returns the *global* index (position in the training pool) of the next
//! example to label. Ties always resolve to the lowest original index, so
//! each strategy is a deterministic function of (context, rng state).
//! Stateless strategies are pure; `graph` and `albl` carry per-trial state
//! and must be constructed fresh for each trial.

pub mod albl;
pub mod bmdr;
pub mod coreset;
pub mod dwus;
pub mod eer;
pub mod graph;
pub mod infodiv;
pub mod kmeans;
pub mod mcm;
pub mod qbc;
pub mod qp;
pub mod uncertainty;

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::CoreError;
use crate::learners::{self, LearnerSpec, Model};
use crate::linalg::Matrix;
use crate::rng::TrialRng;

/// Everything a strategy may look at when choosing the next query.
///
/// `labeled_idx` / `unlabeled_idx` hold ascending global indices into the
/// training pool and row-align with `x_labeled` / `x_unlabeled`.
/// `task_model`, when present, is the task model fitted on exactly
/// (`x_labeled`, `y_labeled`) this round; strategies whose query spec
/// matches the task spec may reuse it instead of refitting.
pub struct StrategyContext<'a> {
    pub x_labeled: &'a Matrix,
    pub y_labeled: &'a [f64],
    pub labeled_idx: &'a [usize],
    pub x_unlabeled: &'a Matrix,
    pub unlabeled_idx: &'a [usize],
    pub query_spec: &'a LearnerSpec,
    pub task_spec: &'a LearnerSpec,
    pub task_model: Option<&'a Model>,
    pub batch: usize,
}

impl<'a> StrategyContext<'a> {
    /// Trains the query model, or borrows the task model when the specs
    /// agree (identical configuration implies an identical fit).
    pub fn query_model(&self) -> Result<QueryModel<'a>, CoreError> {
        if let Some(m) = self.task_model {
            if self.query_spec.same_config(self.task_spec) {
                return Ok(QueryModel::Borrowed(m));
            }
        }
        let m = learners::train(self.query_spec, self.x_labeled, self.y_labeled)?;
        Ok(QueryModel::Owned(m))
    }
}

pub enum QueryModel<'a> {
    Borrowed(&'a Model),
    Owned(Model),
}

impl QueryModel<'_> {
    pub fn get(&self) -> &Model {
        match self {
            QueryModel::Borrowed(m) => m,
            QueryModel::Owned(m) => m,
        }
    }
}

pub trait Strategy {
    fn name(&self) -> &'static str;

    /// Picks the next example to label, returning its global index (an
    /// element of `ctx.unlabeled_idx`).
    fn select(&mut self, ctx: &StrategyContext, rng: &mut TrialRng) -> Result<usize, CoreError>;

    /// Drains a human-readable note about a fallback taken during the last
    /// selection (committee collapse, arm failure, ...), if any.
    fn take_note(&mut self) -> Option<String> {
        None
    }
}

/// Canonical strategy names; the order is the CLI contract. `bso` is the
/// beam-search oracle, dispatched by the engine rather than through
/// [`make`].
pub const STRATEGY_NAMES: [&str; 14] = [
    "uniform", "us-c", "us-nc", "qbc", "eer", "coreset", "graph", "dwus", "mcm", "infodiv", "bmdr",
    "spal", "albl", "bso",
];

/// Instantiates a pool strategy by canonical name with its default
/// hyper-parameters. Returns `None` for unknown names and for `bso`.
pub fn make(name: &str) -> Option<Box<dyn Strategy>> {
    match name {
        "uniform" => Some(Box::new(uncertainty::Uniform)),
        "us-c" => Some(Box::new(uncertainty::UncertaintySampling::compatible())),
        "us-nc" => Some(Box::new(uncertainty::UncertaintySampling::noncompatible())),
        "qbc" => Some(Box::new(qbc::Qbc::default_committee())),
        "eer" => Some(Box::new(eer::Eer::new())),
        "coreset" => Some(Box::new(coreset::CoreSet)),
        "graph" => Some(Box::new(graph::GraphDensity::new())),
        "dwus" => Some(Box::new(dwus::Dwus)),
        "mcm" => Some(Box::new(mcm::Mcm::new())),
        "infodiv" => Some(Box::new(infodiv::InfoDiv::new())),
        "bmdr" => Some(Box::new(bmdr::Bmdr::new())),
        "spal" => Some(Box::new(bmdr::Spal::new())),
        "albl" => Some(Box::new(albl::Albl::new())),
        _ => None,
    }
}

/// Default query-oriented model for a strategy when the caller does not
/// override it: LR(C=0.1) for the deliberately non-compatible US variant,
/// the default SVM(RBF, C=1) otherwise.
pub fn default_query_spec(name: &str) -> LearnerSpec {
    if name == "us-nc" {
        LearnerSpec::lr(0.1)
    } else {
        LearnerSpec::default_model()
    }
}

/// Positive-class probabilities of every unlabeled candidate.
pub(crate) fn proba_vec(model: &Model, x: &Matrix) -> Vec<f64> {
    (0..x.rows()).map(|r| model.proba_pos(x.row(r))).collect()
}

/// Decision values of every unlabeled candidate.
pub(crate) fn decision_vec(model: &Model, x: &Matrix) -> Vec<f64> {
    (0..x.rows()).map(|r| model.decision(x.row(r))).collect()
}

#[cfg(test)]
pub(crate) mod testutil {
    use super::*;
    use crate::rng;
    use alloc::vec::Vec;

    /// A small random but label-consistent pool: two Gaussian-ish blobs,
    /// `n_l` labeled and `n_u` unlabeled rows, d features.
    pub fn random_context_data(
        seed: u64,
        n_l: usize,
        n_u: usize,
        d: usize,
    ) -> (Matrix, Vec<f64>, Vec<usize>, Matrix, Vec<usize>) {
        use rand::Rng;
        let mut r = rng::rng_from(seed);
        let mut rows_l = Vec::new();
        let mut y_l = Vec::new();
        for i in 0..n_l {
            let c = if i % 2 == 0 { 1.0 } else { -1.0 };
            let row: Vec<f64> = (0..d).map(|_| c * 1.5 + r.gen::<f64>() - 0.5).collect();
            rows_l.push(row);
            y_l.push(c);
        }
        let mut rows_u = Vec::new();
        for _ in 0..n_u {
            let c = if r.gen::<f64>() < 0.5 { 1.0 } else { -1.0 };
            let row: Vec<f64> = (0..d)
                .map(|_| c * 1.5 + 3.0 * (r.gen::<f64>() - 0.5))
                .collect();
            rows_u.push(row);
        }
        let labeled_idx: Vec<usize> = (0..n_l).collect();
        let unlabeled_idx: Vec<usize> = (n_l..n_l + n_u).collect();
        (
            Matrix::from_rows(&rows_l),
            y_l,
            labeled_idx,
            Matrix::from_rows(&rows_u),
            unlabeled_idx,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::testutil::random_context_data;
    use super::*;
    use crate::rng;

    #[test]
    fn registry_knows_all_names_and_rejects_unknown() {
        for name in STRATEGY_NAMES {
            if name == "bso" {
                assert!(make(name).is_none());
            } else {
                let s = make(name).expect(name);
                assert_eq!(s.name(), name);
            }
        }
        assert!(make("nope").is_none());
        assert!(make("US-C").is_none());
    }

    #[test]
    fn default_query_specs_match_contract() {
        let nc = default_query_spec("us-nc");
        assert_eq!(nc.kind, learners::LearnerKind::Lr);
        assert!((nc.c - 0.1).abs() < 1e-15);
        let c = default_query_spec("us-c");
        assert_eq!(c.kind, learners::LearnerKind::SvmRbf);
        assert_eq!(c.c, 1.0);
    }

    /// Spec invariant: every selection lands in the unlabeled pool. Runs
    /// each registered strategy over randomized contexts.
    #[test]
    fn every_selection_is_a_current_candidate() {
        let query = LearnerSpec::default_model();
        let task = LearnerSpec::default_model();
        for seed in 0..5u64 {
            let (xl, yl, li, xu, ui) = random_context_data(seed, 8, 12, 3);
            for name in STRATEGY_NAMES {
                if name == "bso" {
                    continue;
                }
                let mut s = make(name).unwrap();
                let q = if name == "mcm" {
                    LearnerSpec::default_model()
                } else {
                    query.clone()
                };
                let ctx = StrategyContext {
                    x_labeled: &xl,
                    y_labeled: &yl,
                    labeled_idx: &li,
                    x_unlabeled: &xu,
                    unlabeled_idx: &ui,
                    query_spec: &q,
                    task_spec: &task,
                    task_model: None,
                    batch: 1,
                };
                let mut r = rng::rng_from(seed.wrapping_mul(31).wrapping_add(7));
                let picked = s
                    .select(&ctx, &mut r)
                    .unwrap_or_else(|e| panic!("{name}: {e}"));
                assert!(
                    ctx.unlabeled_idx.binary_search(&picked).is_ok(),
                    "{name} picked {picked} outside the pool"
                );
            }
        }
    }

    /// Reusing the task model must not change any stateless strategy's
    /// choice (reuse is a pure optimization).
    #[test]
    fn task_model_reuse_does_not_change_choices() {
        let spec = LearnerSpec::default_model();
        let (xl, yl, li, xu, ui) = random_context_data(3, 10, 15, 2);
        let task_model = learners::train(&spec, &xl, &yl).unwrap();
        for name in ["us-c", "coreset", "dwus", "mcm", "infodiv"] {
            let base = StrategyContext {
                x_labeled: &xl,
                y_labeled: &yl,
                labeled_idx: &li,
                x_unlabeled: &xu,
                unlabeled_idx: &ui,
                query_spec: &spec,
                task_spec: &spec,
                task_model: None,
                batch: 1,
            };
            let with_model = StrategyContext {
                task_model: Some(&task_model),
                ..base
            };
            let fresh = StrategyContext {
                task_model: None,
                ..with_model
            };
            let mut s1 = make(name).unwrap();
            let mut s2 = make(name).unwrap();
            let mut r1 = rng::rng_from(99);
            let mut r2 = rng::rng_from(99);
            assert_eq!(
                s1.select(&fresh, &mut r1).unwrap(),
                s2.select(&with_model, &mut r2).unwrap(),
                "{name} changed under task-model reuse"
            );
        }
    }
}
