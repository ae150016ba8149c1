//! Active learning by learning: an adversarial bandit over a small
//! portfolio of query strategies.
//!
//! Arms are full strategies (uncertainty sampling in two flavors plus a
//! uniform baseline). Each round the bandit asks every arm for a
//! recommendation, samples an arm from the exponential-weights
//! distribution mixed with gamma-uniform exploration, and queries that
//! arm's point. The reward is importance-weighted accuracy of the query
//! model over all points queried so far, settled at the start of the
//! next round once the new label is in the pool; each arm that
//! recommended the queried point receives reward / q, where q is the
//! summed probability of the recommending arms.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::CoreError;
use crate::learners::LearnerSpec;
use crate::math;
use crate::rng::{uniform_f64, TrialRng};

use super::uncertainty::{UncertaintySampling, Uniform};
use super::{default_query_spec, Strategy, StrategyContext};

pub const GAMMA: f64 = 0.1;

struct Pending {
    /// Summed selection probability of the arms that recommended the
    /// queried point. Bounded below by gamma / K, so the importance
    /// weight never explodes.
    q: f64,
    recommenders: Vec<usize>,
}

pub struct Albl {
    arms: Vec<Box<dyn Strategy>>,
    arm_specs: Vec<LearnerSpec>,
    weights: Vec<f64>,
    gamma: f64,
    /// (global index, q) for every point this strategy has queried.
    history: Vec<(usize, f64)>,
    pending: Option<Pending>,
    note: Option<String>,
}

impl Default for Albl {
    fn default() -> Self {
        Self::new()
    }
}

impl Albl {
    pub fn new() -> Albl {
        let arms: Vec<Box<dyn Strategy>> = alloc::vec![
            Box::new(UncertaintySampling::compatible()),
            Box::new(UncertaintySampling::noncompatible()),
            Box::new(Uniform),
        ];
        let arm_specs = alloc::vec![
            default_query_spec("us-c"),
            default_query_spec("us-nc"),
            default_query_spec("uniform"),
        ];
        Albl::with_arms(arms, arm_specs)
    }

    pub fn with_arms(arms: Vec<Box<dyn Strategy>>, arm_specs: Vec<LearnerSpec>) -> Albl {
        assert!(!arms.is_empty(), "albl needs at least one arm");
        assert_eq!(arms.len(), arm_specs.len());
        let k = arms.len();
        Albl {
            arms,
            arm_specs,
            weights: alloc::vec![1.0; k],
            gamma: GAMMA,
            history: Vec::new(),
            pending: None,
            note: None,
        }
    }

    fn probabilities(&self) -> Vec<f64> {
        let total: f64 = self.weights.iter().sum();
        let k = self.arms.len() as f64;
        self.weights
            .iter()
            .map(|w| (1.0 - self.gamma) * w / total + self.gamma / k)
            .collect()
    }

    /// Settles the previous round's reward: importance-weighted accuracy
    /// of the query model over the queried history, pushed through the
    /// exponential-weights update for the arms that recommended the
    /// point. Skipped defensively when the model cannot be fit or no
    /// history row is found in the labeled pool.
    fn settle(&mut self, ctx: &StrategyContext) {
        let pending = match self.pending.take() {
            Some(p) => p,
            None => return,
        };
        let query_model = match ctx.query_model() {
            Ok(m) => m,
            Err(_) => return,
        };
        let model = query_model.get();
        let mut num = 0.0;
        let mut den = 0.0;
        for &(global, q) in &self.history {
            let row = match ctx.labeled_idx.binary_search(&global) {
                Ok(r) => r,
                Err(_) => continue,
            };
            let w = 1.0 / q;
            den += w;
            if model.predict(ctx.x_labeled.row(row)) == ctx.y_labeled[row] {
                num += w;
            }
        }
        if den <= 0.0 {
            return;
        }
        self.apply_reward(num / den, &pending);
    }

    fn apply_reward(&mut self, reward: f64, pending: &Pending) {
        let eta = self.gamma / self.arms.len() as f64;
        for &i in &pending.recommenders {
            // q >= gamma / K = eta keeps the exponent at most `reward`.
            self.weights[i] *= math::exp(eta * reward / pending.q);
        }
        let max = self.weights.iter().cloned().fold(0.0f64, f64::max);
        if max > 0.0 {
            for w in &mut self.weights {
                *w /= max;
            }
        }
    }
}

impl Strategy for Albl {
    fn name(&self) -> &'static str {
        "albl"
    }

    fn select(&mut self, ctx: &StrategyContext, rng: &mut TrialRng) -> Result<usize, CoreError> {
        self.settle(ctx);

        // Every arm is consulted in fixed order on the shared stream; a
        // failed arm simply has no advice this round and its weight is
        // left untouched.
        let specs = &self.arm_specs;
        let mut advice: Vec<Option<usize>> = Vec::with_capacity(self.arms.len());
        for (i, arm) in self.arms.iter_mut().enumerate() {
            let arm_ctx = StrategyContext {
                x_labeled: ctx.x_labeled,
                y_labeled: ctx.y_labeled,
                labeled_idx: ctx.labeled_idx,
                x_unlabeled: ctx.x_unlabeled,
                unlabeled_idx: ctx.unlabeled_idx,
                query_spec: &specs[i],
                task_spec: ctx.task_spec,
                task_model: ctx.task_model,
                batch: ctx.batch,
            };
            advice.push(arm.select(&arm_ctx, rng).ok());
        }

        let probs = self.probabilities();
        let chosen = if self.arms.len() == 1 {
            // A lone arm is followed deterministically, with no draw, so
            // the trace is identical to running that arm by itself.
            match advice[0] {
                Some(_) => 0,
                None => return Err(CoreError::InvalidConfig("albl: every arm failed")),
            }
        } else {
            let r = uniform_f64(rng);
            let mut cum = 0.0;
            let mut sampled = probs.len() - 1;
            for (i, &p) in probs.iter().enumerate() {
                cum += p;
                if r < cum {
                    sampled = i;
                    break;
                }
            }
            if advice[sampled].is_some() {
                sampled
            } else {
                let mut order: Vec<usize> =
                    (0..probs.len()).filter(|&i| advice[i].is_some()).collect();
                order.sort_by(|&a, &b| probs[b].partial_cmp(&probs[a]).unwrap());
                let fallback = *order
                    .first()
                    .ok_or(CoreError::InvalidConfig("albl: every arm failed"))?;
                self.note = Some(alloc::format!(
                    "albl arm {} failed; fell back to {}",
                    self.arms[sampled].name(),
                    self.arms[fallback].name()
                ));
                fallback
            }
        };

        let queried = advice[chosen].expect("chosen arm has advice");
        let recommenders: Vec<usize> = (0..self.arms.len())
            .filter(|&i| advice[i] == Some(queried))
            .collect();
        let q: f64 = recommenders.iter().map(|&i| probs[i]).sum();
        self.pending = Some(Pending { q, recommenders });
        self.history.push((queried, q));
        Ok(queried)
    }

    fn take_note(&mut self) -> Option<String> {
        self.note.take()
    }
}
