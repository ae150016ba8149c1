//! Uniform sampling and the two uncertainty-sampling variants.
//!
//! `us-c` is the compatible pairing (query model = task model, margin
//! score); `us-nc` deliberately mismatches with an LR(C=0.1) query model
//! and the entropy score. In binary problems all three classical measures
//! rank candidates identically; both variants exist because the *model*
//! differs, not the measure.

use alloc::vec::Vec;

use crate::error::CoreError;
use crate::math;
use crate::rng::{self, TrialRng};

use super::{proba_vec, Strategy, StrategyContext};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UncertaintyMeasure {
    Margin,
    Entropy,
    LeastConfidence,
}

/// Scores oriented so that the argmax is the most uncertain candidate:
/// margin -> -|p+ - p-|, entropy in nats, least confidence -> -max(p).
pub fn uncertainty_scores(probs: &[f64], measure: UncertaintyMeasure) -> Vec<f64> {
    probs
        .iter()
        .map(|&p| match measure {
            UncertaintyMeasure::Margin => -math::abs(2.0 * p - 1.0),
            UncertaintyMeasure::Entropy => math::binary_entropy(p),
            UncertaintyMeasure::LeastConfidence => {
                if p >= 0.5 {
                    -p
                } else {
                    -(1.0 - p)
                }
            }
        })
        .collect()
}

pub struct Uniform;

impl Strategy for Uniform {
    fn name(&self) -> &'static str {
        "uniform"
    }

    fn select(&mut self, ctx: &StrategyContext, rng: &mut TrialRng) -> Result<usize, CoreError> {
        let pos = rng::uniform_index(ctx.unlabeled_idx.len(), rng);
        Ok(ctx.unlabeled_idx[pos])
    }
}

pub struct UncertaintySampling {
    name: &'static str,
    measure: UncertaintyMeasure,
}

impl UncertaintySampling {
    pub fn compatible() -> UncertaintySampling {
        UncertaintySampling {
            name: "us-c",
            measure: UncertaintyMeasure::Margin,
        }
    }

    pub fn noncompatible() -> UncertaintySampling {
        UncertaintySampling {
            name: "us-nc",
            measure: UncertaintyMeasure::Entropy,
        }
    }
}

impl Strategy for UncertaintySampling {
    fn name(&self) -> &'static str {
        self.name
    }

    fn select(&mut self, ctx: &StrategyContext, _rng: &mut TrialRng) -> Result<usize, CoreError> {
        let model = ctx.query_model()?;
        let probs = proba_vec(model.get(), ctx.x_unlabeled);
        let scores = uncertainty_scores(&probs, self.measure);
        Ok(ctx.unlabeled_idx[math::argmax(&scores)])
    }
}
