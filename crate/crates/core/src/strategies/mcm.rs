//! MCM: margin cluster mining. Restrict to candidates inside the SVM
//! margin (|f(x)| < 1), cluster them with seeded k-means, and query the
//! in-margin point closest to its own cluster center. An empty margin set
//! falls back to the smallest |f|. Requires an SVM-family query model,
//! since the functional margin defines the candidate set.

use alloc::vec::Vec;

use crate::error::CoreError;
use crate::learners::LearnerKind;
use crate::math;
use crate::rng::TrialRng;

use super::kmeans::kmeans;
use super::{decision_vec, Strategy, StrategyContext};

pub const DEFAULT_K_CLUSTERS: usize = 10;

pub struct Mcm {
    pub k_clusters: usize,
}

impl Default for Mcm {
    fn default() -> Self {
        Self::new()
    }
}

impl Mcm {
    pub fn new() -> Mcm {
        Mcm {
            k_clusters: DEFAULT_K_CLUSTERS,
        }
    }
}

impl Strategy for Mcm {
    fn name(&self) -> &'static str {
        "mcm"
    }

    fn select(&mut self, ctx: &StrategyContext, rng: &mut TrialRng) -> Result<usize, CoreError> {
        match ctx.query_spec.kind {
            LearnerKind::SvmRbf | LearnerKind::SvmLinear => {}
            _ => {
                return Err(CoreError::InvalidConfig(
                    "mcm requires an SVM-family query model",
                ))
            }
        }
        let model = ctx.query_model()?;
        let f = decision_vec(model.get(), ctx.x_unlabeled);

        let margin: Vec<usize> = (0..f.len()).filter(|&i| math::abs(f[i]) < 1.0).collect();
        if margin.is_empty() {
            let abs_f: Vec<f64> = f.iter().map(|&v| -math::abs(v)).collect();
            return Ok(ctx.unlabeled_idx[math::argmax(&abs_f)]);
        }
        if margin.len() == 1 {
            return Ok(ctx.unlabeled_idx[margin[0]]);
        }

        let subset = ctx.x_unlabeled.select_rows(&margin);
        let k = self.k_clusters.min(margin.len());
        let km = kmeans(&subset, k, rng);

        let mut best = 0usize;
        let mut best_key = (f64::INFINITY, f64::INFINITY, usize::MAX);
        for (m, &pos) in margin.iter().enumerate() {
            let dist = math::squared_distance(subset.row(m), km.centers.row(km.assign[m]));
            let key = (dist, math::abs(f[pos]), ctx.unlabeled_idx[pos]);
            if key < best_key {
                best_key = key;
                best = pos;
            }
        }
        Ok(ctx.unlabeled_idx[best])
    }
}
