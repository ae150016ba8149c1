//! Expected error reduction.
//!
//! For each candidate x and each hypothetical label y, the query model is
//! refit on D_l + {(x, y)} and its self-estimated risk is measured over a
//! subsample of the remaining pool: with zero-one loss the per-point risk
//! is 1 - max(p, 1-p), with log loss it is the predictive entropy. The
//! selected candidate minimizes the label-expectation of that risk,
//! weighting by the current model's p(y|x). Candidate and evaluation
//! subsampling keep the quadratic refit cost bounded.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::CoreError;
use crate::learners::{self, Model};
use crate::linalg::Matrix;
use crate::math;
use crate::rng::{self, TrialRng};

use super::uncertainty::{uncertainty_scores, UncertaintyMeasure};
use super::{proba_vec, Strategy, StrategyContext};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EerLoss {
    ZeroOne,
    Log,
}

pub const DEFAULT_CANDIDATE_CAP: usize = 250;
pub const DEFAULT_EVAL_CAP: usize = 500;

pub struct Eer {
    pub loss: EerLoss,
    pub candidate_cap: usize,
    pub eval_cap: usize,
    note: Option<String>,
}

impl Default for Eer {
    fn default() -> Self {
        Self::new()
    }
}

impl Eer {
    pub fn new() -> Eer {
        Eer {
            loss: EerLoss::ZeroOne,
            candidate_cap: DEFAULT_CANDIDATE_CAP,
            eval_cap: DEFAULT_EVAL_CAP,
            note: None,
        }
    }
}

fn point_risk(model: &Model, row: &[f64], loss: EerLoss) -> f64 {
    let p = model.proba_pos(row);
    match loss {
        EerLoss::ZeroOne => 1.0 - if p >= 0.5 { p } else { 1.0 - p },
        EerLoss::Log => math::binary_entropy(p),
    }
}

fn subsample(n: usize, cap: usize, rng: &mut TrialRng) -> Vec<usize> {
    if cap >= n {
        (0..n).collect()
    } else {
        rng::sample_without_replacement(n, cap, rng)
    }
}

impl Strategy for Eer {
    fn name(&self) -> &'static str {
        "eer"
    }

    fn select(&mut self, ctx: &StrategyContext, rng: &mut TrialRng) -> Result<usize, CoreError> {
        let model = ctx.query_model()?;
        let probs = proba_vec(model.get(), ctx.x_unlabeled);

        let n_u = ctx.x_unlabeled.rows();
        let candidates = subsample(n_u, self.candidate_cap, rng);
        let evals = subsample(n_u, self.eval_cap, rng);

        // One reusable augmented design: labeled rows plus a final slot
        // that takes each candidate in turn.
        let n_l = ctx.x_labeled.rows();
        let mut aug_rows: Vec<Vec<f64>> = (0..n_l).map(|i| ctx.x_labeled.row(i).to_vec()).collect();
        aug_rows.push(alloc::vec![0.0; ctx.x_labeled.cols()]);
        let mut aug_y: Vec<f64> = ctx.y_labeled.to_vec();
        aug_y.push(0.0);

        let mut best: Option<(usize, f64)> = None;
        let mut skipped = 0usize;
        for &c in &candidates {
            aug_rows[n_l] = ctx.x_unlabeled.row(c).to_vec();
            let aug_x = Matrix::from_rows(&aug_rows);

            let p_pos = probs[c];
            let mut expected = 0.0;
            let mut failed = false;
            for (y, w) in [(1.0, p_pos), (-1.0, 1.0 - p_pos)] {
                if w == 0.0 {
                    continue;
                }
                aug_y[n_l] = y;
                let refit = match learners::train(ctx.query_spec, &aug_x, &aug_y) {
                    Ok(m) => m,
                    Err(_) => {
                        failed = true;
                        break;
                    }
                };
                let mut risk = 0.0;
                let mut cnt = 0usize;
                for &e in &evals {
                    if e == c {
                        continue;
                    }
                    risk += point_risk(&refit, ctx.x_unlabeled.row(e), self.loss);
                    cnt += 1;
                }
                if cnt > 0 {
                    risk /= cnt as f64;
                }
                expected += w * risk;
            }
            if failed {
                skipped += 1;
                continue;
            }
            // Candidates are scanned in ascending position order, so a
            // strict < keeps ties on the lowest original index.
            if best.is_none_or(|(_, e)| expected < e) {
                best = Some((c, expected));
            }
        }

        match best {
            Some((c, _)) => Ok(ctx.unlabeled_idx[c]),
            None => {
                self.note = Some(alloc::format!(
                    "eer: all {skipped} candidate refits failed; fell back to margin sampling"
                ));
                let scores = uncertainty_scores(&probs, UncertaintyMeasure::Margin);
                Ok(ctx.unlabeled_idx[math::argmax(&scores)])
            }
        }
    }

    fn take_note(&mut self) -> Option<String> {
        self.note.take()
    }
}
