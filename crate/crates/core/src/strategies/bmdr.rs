//! BMDR: batch-mode discriminative and representative querying, and its
//! constraint-generalized sibling SPAL.
//!
//! Alternating scheme with unit batches. Step 1 fits the decision values
//! by kernel ridge regression on the labeled pool; a candidate's
//! discriminative cost is pred^2 + 2|pred| (cheapest at the boundary).
//! Step 2 solves
//!
//!   min_a  beta * [ 0.5 a'K_uu a + ((u-b)/n) 1'K_lu a
//!                   - ((l+b)/n) 1'K_uu a ] + sum_j a_j cost_j
//!   s.t.   a in [0,1]^u,  e.a = b
//!
//! by projected gradient over the stabilized kernel; the queried point is
//! the argmax of a. BMDR fixes e = 1; SPAL exposes the weighted
//! constraint (and equals BMDR when e = 1).

use alloc::vec::Vec;

use crate::error::CoreError;
use crate::learners::{rbf_kernel, rbf_kernel_sym};
use crate::linalg::{self, Matrix};
use crate::math;
use crate::rng::TrialRng;

use super::qp::{pgd_box_simplex, stabilize_kernel};
use super::{Strategy, StrategyContext};

pub const DEFAULT_BETA: f64 = 1000.0;
pub const DEFAULT_LAMBDA: f64 = 1.0;
pub const DEFAULT_B: f64 = 1.0;
const PGD_ITERS: usize = 500;
const PGD_TOL: f64 = 1e-8;

pub struct Bmdr {
    pub beta: f64,
    pub lambda: f64,
    pub b: f64,
}

impl Default for Bmdr {
    fn default() -> Self {
        Self::new()
    }
}

impl Bmdr {
    pub fn new() -> Bmdr {
        Bmdr {
            beta: DEFAULT_BETA,
            lambda: DEFAULT_LAMBDA,
            b: DEFAULT_B,
        }
    }
}

pub struct Spal {
    pub beta: f64,
    pub lambda: f64,
    pub b: f64,
    /// Constraint weights; `None` means all ones (the BMDR constraint).
    pub e: Option<Vec<f64>>,
}

impl Default for Spal {
    fn default() -> Self {
        Self::new()
    }
}

impl Spal {
    pub fn new() -> Spal {
        Spal {
            beta: DEFAULT_BETA,
            lambda: DEFAULT_LAMBDA,
            b: DEFAULT_B,
            e: None,
        }
    }
}

/// The shared solver. Returns the relaxed batch weights over the
/// unlabeled pool; the caller extracts the top-1.
pub fn solve_alpha(
    ctx: &StrategyContext,
    beta: f64,
    lambda: f64,
    b: f64,
    e: Option<&[f64]>,
) -> Result<Vec<f64>, CoreError> {
    let l = ctx.x_labeled.rows();
    let u = ctx.x_unlabeled.rows();
    let n = (l + u) as f64;
    let gamma = 1.0 / ctx.x_labeled.cols().max(1) as f64;

    // Step 1: kernel ridge on the labeled pool, then per-candidate
    // discriminative costs from the predicted decision values.
    let mut k_ll = rbf_kernel_sym(ctx.x_labeled, gamma);
    for i in 0..l {
        k_ll.set(i, i, k_ll.get(i, i) + lambda);
    }
    let coef = linalg::solve_spd(&k_ll, ctx.y_labeled).ok_or(CoreError::Numeric {
        context: "bmdr ridge system lost positive definiteness",
        value: lambda,
    })?;
    let k_lu = rbf_kernel(ctx.x_labeled, ctx.x_unlabeled, gamma);
    let mut cost = alloc::vec![0.0f64; u];
    for j in 0..u {
        let mut pred = 0.0;
        for i in 0..l {
            pred += coef[i] * k_lu.get(i, j);
        }
        cost[j] = pred * pred + 2.0 * math::abs(pred);
    }

    // Step 2: representative + discriminative QP over the candidates.
    let k_uu = stabilize_kernel(&rbf_kernel_sym(ctx.x_unlabeled, gamma))?;
    let mut quad = Matrix::zeros(u, u);
    for i in 0..u {
        for j in 0..u {
            quad.set(i, j, beta * k_uu.get(i, j));
        }
    }
    let mut lin = alloc::vec![0.0f64; u];
    for j in 0..u {
        let labeled_mass: f64 = (0..l).map(|i| k_lu.get(i, j)).sum();
        let unlabeled_mass: f64 = (0..u).map(|i| k_uu.get(i, j)).sum();
        lin[j] = beta
            * (((u as f64 - b) / n) * labeled_mass - ((l as f64 + b) / n) * unlabeled_mass)
            + cost[j];
    }

    let ones;
    let weights = match e {
        Some(w) => {
            assert_eq!(w.len(), u, "constraint weights must cover the pool");
            assert!(
                w.iter().all(|&x| x > 0.0),
                "constraint weights must be positive"
            );
            w
        }
        None => {
            ones = alloc::vec![1.0f64; u];
            &ones
        }
    };
    Ok(pgd_box_simplex(&quad, &lin, weights, b, PGD_ITERS, PGD_TOL))
}

fn top_index(ctx: &StrategyContext, alpha: &[f64]) -> usize {
    ctx.unlabeled_idx[math::argmax(alpha)]
}

impl Strategy for Bmdr {
    fn name(&self) -> &'static str {
        "bmdr"
    }

    fn select(&mut self, ctx: &StrategyContext, _rng: &mut TrialRng) -> Result<usize, CoreError> {
        let alpha = solve_alpha(ctx, self.beta, self.lambda, self.b, None)?;
        Ok(top_index(ctx, &alpha))
    }
}

impl Strategy for Spal {
    fn name(&self) -> &'static str {
        "spal"
    }

    fn select(&mut self, ctx: &StrategyContext, _rng: &mut TrialRng) -> Result<usize, CoreError> {
        let alpha = solve_alpha(ctx, self.beta, self.lambda, self.b, self.e.as_deref())?;
        Ok(top_index(ctx, &alpha))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learners::LearnerSpec;
    use crate::rng::rng_from;
    use crate::strategies::testutil::random_context_data;

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

    /// Evaluates the full step-2 objective at a given alpha, written
    /// independently of the solver's algebra.
    fn objective(ctx: &StrategyContext, beta: f64, lambda: f64, b: f64, alpha: &[f64]) -> f64 {
        let l = ctx.x_labeled.rows();
        let u = ctx.x_unlabeled.rows();
        let n = (l + u) as f64;
        let gamma = 1.0 / ctx.x_labeled.cols() as f64;
        let mut k_ll = rbf_kernel_sym(ctx.x_labeled, gamma);
        for i in 0..l {
            k_ll.set(i, i, k_ll.get(i, i) + lambda);
        }
        let coef = linalg::solve_spd(&k_ll, ctx.y_labeled).unwrap();
        let k_lu = rbf_kernel(ctx.x_labeled, ctx.x_unlabeled, gamma);
        let k_uu = stabilize_kernel(&rbf_kernel_sym(ctx.x_unlabeled, gamma)).unwrap();

        let mut quad = 0.0;
        for i in 0..u {
            for j in 0..u {
                quad += alpha[i] * k_uu.get(i, j) * alpha[j];
            }
        }
        let mut rep_lin = 0.0;
        let mut disc = 0.0;
        for j in 0..u {
            let lab: f64 = (0..l).map(|i| k_lu.get(i, j)).sum();
            let unlab: f64 = (0..u).map(|i| k_uu.get(i, j)).sum();
            rep_lin += alpha[j] * (((u as f64 - b) / n) * lab - ((l as f64 + b) / n) * unlab);
            let mut pred = 0.0;
            for i in 0..l {
                pred += coef[i] * k_lu.get(i, j);
            }
            disc += alpha[j] * (pred * pred + 2.0 * pred.abs());
        }
        beta * (0.5 * quad + rep_lin) + disc
    }

    #[test]
    fn alpha_is_feasible() {
        let spec = LearnerSpec::default_model();
        for seed in 0..5u64 {
            let (xl, yl, li, xu, ui) = random_context_data(seed, 6, 9, 2);
            let ctx = ctx_from(&xl, &yl, &li, &xu, &ui, &spec);
            let alpha = solve_alpha(&ctx, DEFAULT_BETA, DEFAULT_LAMBDA, 1.0, None).unwrap();
            let sum: f64 = alpha.iter().sum();
            assert!((sum - 1.0).abs() <= 1e-6, "sum = {sum}");
            assert!(alpha.iter().all(|&a| (-1e-9..=1.0 + 1e-9).contains(&a)));
        }
    }

    #[test]
    fn discriminative_only_matches_cheapest_cost() {
        // With beta = 0 the objective is separable: the optimum puts the
        // whole unit budget on the smallest per-candidate cost.
        let spec = LearnerSpec::default_model();
        for seed in 0..5u64 {
            let (xl, yl, li, xu, ui) = random_context_data(seed + 50, 6, 7, 2);
            let ctx = ctx_from(&xl, &yl, &li, &xu, &ui, &spec);
            let alpha = solve_alpha(&ctx, 0.0, DEFAULT_LAMBDA, 1.0, None).unwrap();
            let picked = math::argmax(&alpha);

            let gamma = 1.0 / xl.cols() as f64;
            let mut k_ll = rbf_kernel_sym(&xl, gamma);
            for i in 0..xl.rows() {
                k_ll.set(i, i, k_ll.get(i, i) + DEFAULT_LAMBDA);
            }
            let coef = linalg::solve_spd(&k_ll, &yl).unwrap();
            let k_lu = rbf_kernel(&xl, &xu, gamma);
            let costs: Vec<f64> = (0..xu.rows())
                .map(|j| {
                    let pred: f64 = (0..xl.rows()).map(|i| coef[i] * k_lu.get(i, j)).sum();
                    pred * pred + 2.0 * pred.abs()
                })
                .collect();
            let neg: Vec<f64> = costs.iter().map(|&c| -c).collect();
            assert_eq!(picked, math::argmax(&neg), "seed {seed}");
        }
    }

    #[test]
    fn matches_one_hot_enumeration_on_tiny_pools() {
        let spec = LearnerSpec::default_model();
        for seed in 0..8u64 {
            let (xl, yl, li, xu, ui) = random_context_data(seed + 100, 5, 6, 2);
            let ctx = ctx_from(&xl, &yl, &li, &xu, &ui, &spec);
            let mut s = Bmdr::new();
            let got = s.select(&ctx, &mut rng_from(seed)).unwrap();

            // Exhaustive oracle over the feasible one-hot vertices.
            let u = xu.rows();
            let mut best = usize::MAX;
            let mut best_obj = f64::INFINITY;
            for j in 0..u {
                let mut alpha = alloc::vec![0.0; u];
                alpha[j] = 1.0;
                let obj = objective(&ctx, DEFAULT_BETA, DEFAULT_LAMBDA, 1.0, &alpha);
                if obj < best_obj {
                    best_obj = obj;
                    best = j;
                }
            }
            assert_eq!(got, ui[best], "seed {seed}");
        }
    }

    #[test]
    fn spal_with_unit_weights_equals_bmdr() {
        let spec = LearnerSpec::default_model();
        for seed in 0..6u64 {
            let (xl, yl, li, xu, ui) = random_context_data(seed + 200, 6, 8, 3);
            let ctx = ctx_from(&xl, &yl, &li, &xu, &ui, &spec);
            let mut bmdr = Bmdr::new();
            let mut spal = Spal::new();
            assert_eq!(
                bmdr.select(&ctx, &mut rng_from(0)).unwrap(),
                spal.select(&ctx, &mut rng_from(0)).unwrap(),
                "seed {seed}"
            );
            let _ = ui;
        }
    }

    #[test]
    fn spal_scaled_weights_match_scaled_vertex_enumeration() {
        let spec = LearnerSpec::default_model();
        for seed in 0..6u64 {
            let (xl, yl, li, xu, ui) = random_context_data(seed + 300, 5, 6, 2);
            let ctx = ctx_from(&xl, &yl, &li, &xu, &ui, &spec);
            let u = xu.rows();
            let mut s = Spal::new();
            s.e = Some(alloc::vec![2.0; u]);
            let got = s.select(&ctx, &mut rng_from(0)).unwrap();

            // Feasible "one-hot" vertices under 2a.1 = 1 are a_j = 0.5.
            let mut best = usize::MAX;
            let mut best_obj = f64::INFINITY;
            for j in 0..u {
                let mut alpha = alloc::vec![0.0; u];
                alpha[j] = 0.5;
                let obj = objective(&ctx, DEFAULT_BETA, DEFAULT_LAMBDA, 1.0, &alpha);
                if obj < best_obj {
                    best_obj = obj;
                    best = j;
                }
            }
            assert_eq!(got, ui[best], "seed {seed}");
        }
    }

    #[test]
    fn spal_constraint_residual_is_tight() {
        let spec = LearnerSpec::default_model();
        let (xl, yl, li, xu, ui) = random_context_data(77, 6, 9, 2);
        let ctx = ctx_from(&xl, &yl, &li, &xu, &ui, &spec);
        let e = alloc::vec![1.5; xu.rows()];
        let alpha = solve_alpha(&ctx, DEFAULT_BETA, DEFAULT_LAMBDA, 1.0, Some(&e)).unwrap();
        let dot: f64 = alpha.iter().zip(&e).map(|(a, w)| a * w).sum();
        assert!((dot - 1.0).abs() <= 1e-6);
        let _ = ui;
    }
}
