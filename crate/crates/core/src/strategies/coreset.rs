//! Core-Set selection as greedy k-center: query the candidate whose
//! distance to the nearest labeled example is largest. Squared Euclidean
//! distance gives the same argmax and tie pattern as Euclidean.

use crate::error::CoreError;
use crate::math;
use crate::rng::TrialRng;

use super::{Strategy, StrategyContext};

pub struct CoreSet;

impl Strategy for CoreSet {
    fn name(&self) -> &'static str {
        "coreset"
    }

    fn select(&mut self, ctx: &StrategyContext, _rng: &mut TrialRng) -> Result<usize, CoreError> {
        let mut best_pos = 0usize;
        let mut best = f64::NEG_INFINITY;
        for u in 0..ctx.x_unlabeled.rows() {
            let row = ctx.x_unlabeled.row(u);
            let mut nearest = f64::INFINITY;
            for l in 0..ctx.x_labeled.rows() {
                let d = math::squared_distance(row, ctx.x_labeled.row(l));
                if d < nearest {
                    nearest = d;
                }
            }
            if nearest > best {
                best = nearest;
                best_pos = u;
            }
        }
        Ok(ctx.unlabeled_idx[best_pos])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learners::LearnerSpec;
    use crate::linalg::Matrix;
    use crate::rng::{self, rng_from};

    fn ctx_from<'a>(
        xl: &'a Matrix,
        yl: &'a [f64],
        li: &'a [usize],
        xu: &'a Matrix,
        ui: &'a [usize],
        spec: &'a LearnerSpec,
    ) -> StrategyContext<'a> {
        StrategyContext {
            x_labeled: xl,
            y_labeled: yl,
            labeled_idx: li,
            x_unlabeled: xu,
            unlabeled_idx: ui,
            query_spec: spec,
            task_spec: spec,
            task_model: None,
            batch: 1,
        }
    }

    #[test]
    fn farthest_point_is_forced() {
        let xl = Matrix::from_rows(&[alloc::vec![0.0]]);
        let yl = [1.0];
        let li = [0usize];
        let xu = Matrix::from_rows(&[alloc::vec![1.0], alloc::vec![10.0]]);
        let ui = [1usize, 2];
        let spec = LearnerSpec::default_model();
        let ctx = ctx_from(&xl, &yl, &li, &xu, &ui, &spec);
        assert_eq!(CoreSet.select(&ctx, &mut rng_from(0)).unwrap(), 2);
    }

    #[test]
    fn labeled_duplicate_never_wins_over_distinct_candidates() {
        let xl = Matrix::from_rows(&[alloc::vec![3.0, 3.0]]);
        let yl = [1.0];
        let li = [0usize];
        let xu = Matrix::from_rows(&[alloc::vec![3.0, 3.0], alloc::vec![3.1, 3.0]]);
        let ui = [1usize, 2];
        let spec = LearnerSpec::default_model();
        let ctx = ctx_from(&xl, &yl, &li, &xu, &ui, &spec);
        assert_eq!(CoreSet.select(&ctx, &mut rng_from(0)).unwrap(), 2);
    }

    #[test]
    fn matches_brute_force_max_min() {
        use rand::Rng;
        for seed in 0..8u64 {
            let mut r = rng::rng_from(900 + seed);
            let n_l = 4;
            let n_u = 8;
            let d = 3;
            let xl = Matrix::from_rows(
                &(0..n_l)
                    .map(|_| {
                        (0..d)
                            .map(|_| r.gen::<f64>() * 4.0 - 2.0)
                            .collect::<Vec<_>>()
                    })
                    .collect::<Vec<_>>(),
            );
            let xu = Matrix::from_rows(
                &(0..n_u)
                    .map(|_| {
                        (0..d)
                            .map(|_| r.gen::<f64>() * 4.0 - 2.0)
                            .collect::<Vec<_>>()
                    })
                    .collect::<Vec<_>>(),
            );
            let yl = alloc::vec![1.0, -1.0, 1.0, -1.0];
            let li: Vec<usize> = (0..n_l).collect();
            let ui: Vec<usize> = (n_l..n_l + n_u).collect();
            let spec = LearnerSpec::default_model();
            let ctx = ctx_from(&xl, &yl, &li, &xu, &ui, &spec);

            // Independent oracle: Euclidean (not squared) max-min scan.
            let mut want = 0usize;
            let mut want_d = f64::NEG_INFINITY;
            for u in 0..n_u {
                let mut nearest = f64::INFINITY;
                for l in 0..n_l {
                    let d2 = math::sqrt(math::squared_distance(xu.row(u), xl.row(l)));
                    nearest = nearest.min(d2);
                }
                if nearest > want_d {
                    want_d = nearest;
                    want = u;
                }
            }
            assert_eq!(
                CoreSet.select(&ctx, &mut rng_from(0)).unwrap(),
                ui[want],
                "seed {seed}"
            );
        }
    }
}
