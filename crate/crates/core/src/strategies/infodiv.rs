//! InfoDiv: informativeness plus diversity. The pool is clustered with
//! seeded k-means, each cluster receives a largest-remainder quota of the
//! batch proportional to its size, and quotas are filled with the
//! smallest-margin members. With B = 1 the method collapses to global
//! margin sampling, which is the protocol path; batching exists for the
//! equivalence contract and tests.

use alloc::vec::Vec;

use crate::error::CoreError;
use crate::math;
use crate::rng::TrialRng;

use super::kmeans::kmeans;
use super::uncertainty::{uncertainty_scores, UncertaintyMeasure};
use super::{proba_vec, Strategy, StrategyContext};

pub const DEFAULT_K_CLUSTERS: usize = 10;

pub struct InfoDiv {
    pub k_clusters: usize,
}

impl Default for InfoDiv {
    fn default() -> Self {
        Self::new()
    }
}

impl InfoDiv {
    pub fn new() -> InfoDiv {
        InfoDiv {
            k_clusters: DEFAULT_K_CLUSTERS,
        }
    }

    /// Batch selection; returns ascending global indices. `B = |D_u|`
    /// returns the whole pool.
    pub fn select_batch(
        &self,
        ctx: &StrategyContext,
        b: usize,
        rng: &mut TrialRng,
    ) -> Result<Vec<usize>, CoreError> {
        let n = ctx.x_unlabeled.rows();
        assert!(b >= 1 && b <= n, "batch must be within the pool size");
        let model = ctx.query_model()?;
        let probs = proba_vec(model.get(), ctx.x_unlabeled);
        let margin = uncertainty_scores(&probs, UncertaintyMeasure::Margin);

        if b == 1 {
            return Ok(alloc::vec![ctx.unlabeled_idx[math::argmax(&margin)]]);
        }
        if b == n {
            return Ok(ctx.unlabeled_idx.to_vec());
        }

        let k = self.k_clusters.min(n);
        let km = kmeans(ctx.x_unlabeled, k, rng);
        let mut sizes = alloc::vec![0usize; k];
        for &a in &km.assign {
            sizes[a] += 1;
        }
        let quotas = largest_remainder_quotas(&sizes, b);

        let mut picked = Vec::with_capacity(b);
        for c in 0..k {
            if quotas[c] == 0 {
                continue;
            }
            // Cluster members, most uncertain first; margin ties keep the
            // lower global index (stable sort over ascending positions).
            let mut members: Vec<usize> = (0..n).filter(|&i| km.assign[i] == c).collect();
            members.sort_by(|&a, &b| margin[b].partial_cmp(&margin[a]).unwrap());
            for &m in members.iter().take(quotas[c]) {
                picked.push(ctx.unlabeled_idx[m]);
            }
        }
        picked.sort_unstable();
        Ok(picked)
    }
}

/// Allocates `b` slots across clusters proportionally to their sizes:
/// floor quotas first, leftovers by descending fractional remainder with
/// ties to the lower cluster id, never exceeding a cluster's size.
pub fn largest_remainder_quotas(sizes: &[usize], b: usize) -> Vec<usize> {
    let total: usize = sizes.iter().sum();
    assert!(b <= total, "cannot allocate more slots than points");
    let mut quotas: Vec<usize> = Vec::with_capacity(sizes.len());
    let mut remainders: Vec<(usize, f64)> = Vec::with_capacity(sizes.len());
    let mut assigned = 0usize;
    for (c, &s) in sizes.iter().enumerate() {
        let share = b as f64 * s as f64 / total as f64;
        let q = math::floor(share) as usize;
        quotas.push(q.min(s));
        assigned += quotas[c];
        remainders.push((c, share - q as f64));
    }
    remainders.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then_with(|| a.0.cmp(&b.0)));
    let mut left = b - assigned;
    while left > 0 {
        let mut granted = false;
        for &(c, _) in &remainders {
            if left == 0 {
                break;
            }
            if quotas[c] < sizes[c] {
                quotas[c] += 1;
                left -= 1;
                granted = true;
            }
        }
        assert!(granted, "allocation must progress while slots remain");
    }
    quotas
}

impl Strategy for InfoDiv {
    fn name(&self) -> &'static str {
        "infodiv"
    }

    fn select(&mut self, ctx: &StrategyContext, rng: &mut TrialRng) -> Result<usize, CoreError> {
        let batch = self.select_batch(ctx, ctx.batch.max(1), rng)?;
        Ok(batch[0])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learners::LearnerSpec;
    use crate::linalg::Matrix;
    use crate::rng::rng_from;
    use crate::strategies::testutil::random_context_data;
    use crate::strategies::uncertainty::UncertaintySampling;

    #[test]
    fn quota_allocation_examples() {
        assert_eq!(largest_remainder_quotas(&[6, 3], 3), alloc::vec![2, 1]);
        assert_eq!(largest_remainder_quotas(&[5, 5], 1), alloc::vec![1, 0]);
        assert_eq!(largest_remainder_quotas(&[1, 9], 10), alloc::vec![1, 9]);
        assert_eq!(
            largest_remainder_quotas(&[2, 2, 2], 6),
            alloc::vec![2, 2, 2]
        );
        // Capacity overflow is redistributed: cluster 0 can take only 1.
        assert_eq!(largest_remainder_quotas(&[1, 4], 4), alloc::vec![1, 3]);
    }

    #[test]
    fn b_equals_pool_returns_everything() {
        let (xl, yl, li, xu, ui) = random_context_data(5, 6, 9, 2);
        let spec = LearnerSpec::default_model();
        let ctx = StrategyContext {
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
        let got = InfoDiv::new()
            .select_batch(&ctx, 9, &mut rng_from(3))
            .unwrap();
        assert_eq!(got, ui);
    }

    #[test]
    fn batch_one_equals_margin_sampling_on_random_contexts() {
        let spec = LearnerSpec::default_model();
        for seed in 0..25u64 {
            let (xl, yl, li, xu, ui) = random_context_data(seed, 8, 14, 3);
            let ctx = StrategyContext {
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
            let mut a = InfoDiv::new();
            let mut b = UncertaintySampling::compatible();
            assert_eq!(
                a.select(&ctx, &mut rng_from(seed)).unwrap(),
                b.select(&ctx, &mut rng_from(seed ^ 0x5555)).unwrap(),
                "seed {seed}"
            );
        }
    }

    #[test]
    fn quotas_respect_cluster_proportions_in_batches() {
        // Two tight, far-apart clusters of sizes 6 and 3 and B = 3: the
        // batch must take 2 from the large cluster and 1 from the small.
        let xl = Matrix::from_rows(&[alloc::vec![-9.0], alloc::vec![9.0]]);
        let yl = [-1.0, 1.0];
        let li = [0usize, 1];
        let mut rows = Vec::new();
        for i in 0..6 {
            rows.push(alloc::vec![-5.0 - 0.01 * i as f64]);
        }
        for i in 0..3 {
            rows.push(alloc::vec![5.0 + 0.01 * i as f64]);
        }
        let xu = Matrix::from_rows(&rows);
        let ui: Vec<usize> = (2..11).collect();
        let spec = LearnerSpec::default_model();
        let ctx = StrategyContext {
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
        let mut s = InfoDiv::new();
        s.k_clusters = 2;
        let got = s.select_batch(&ctx, 3, &mut rng_from(8)).unwrap();
        assert_eq!(got.len(), 3);
        let left = got.iter().filter(|&&g| g < 8).count();
        let right = got.iter().filter(|&&g| g >= 8).count();
        assert_eq!((left, right), (2, 1));
    }
}
