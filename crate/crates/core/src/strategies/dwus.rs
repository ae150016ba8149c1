//! Density-weighted uncertainty sampling.
//!
//! score(x) = (1 - |p+ - p-|) * density(x): the first factor is margin
//! uncertainty rescaled to [0, 1] so that multiplying by a positive
//! density keeps both orderings (equal densities reduce to margin
//! sampling, equal uncertainties pick the densest candidate). Density is
//! a Gaussian KDE over the unlabeled pool with the median pairwise
//! distance as bandwidth.

use alloc::vec::Vec;

use crate::error::CoreError;
use crate::linalg::Matrix;
use crate::math;
use crate::rng::TrialRng;

use super::{proba_vec, Strategy, StrategyContext};

pub struct Dwus;

/// KDE density of each pool point among the pool, up to a constant
/// factor. All-identical pools (zero bandwidth) get uniform density 1.
pub fn pool_density(x: &Matrix) -> Vec<f64> {
    let n = x.rows();
    let mut d2 = Matrix::zeros(n, n);
    let mut dists = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            let v = math::squared_distance(x.row(i), x.row(j));
            d2.set(i, j, v);
            d2.set(j, i, v);
            dists.push(math::sqrt(v));
        }
    }
    let h = if dists.is_empty() {
        0.0
    } else {
        math::median(&dists)
    };
    if h <= 1e-12 {
        return alloc::vec![1.0; n];
    }
    let inv = 1.0 / (2.0 * h * h);
    (0..n)
        .map(|i| (0..n).map(|j| math::exp(-d2.get(i, j) * inv)).sum::<f64>() / n as f64)
        .collect()
}

impl Strategy for Dwus {
    fn name(&self) -> &'static str {
        "dwus"
    }

    fn select(&mut self, ctx: &StrategyContext, _rng: &mut TrialRng) -> Result<usize, CoreError> {
        let model = ctx.query_model()?;
        let probs = proba_vec(model.get(), ctx.x_unlabeled);
        let density = pool_density(ctx.x_unlabeled);
        let scores: Vec<f64> = probs
            .iter()
            .zip(&density)
            .map(|(&p, &d)| (1.0 - math::abs(2.0 * p - 1.0)) * d)
            .collect();
        Ok(ctx.unlabeled_idx[math::argmax(&scores)])
    }
}
