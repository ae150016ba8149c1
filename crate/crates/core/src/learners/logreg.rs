//! L2-regularized logistic regression fit by Newton's method.
//!
//! Objective: sum_i log(1 + exp(-y_i (w.x_i + b))) + ||w||^2 / (2C), with
//! the intercept unregularized. Full Newton steps with Armijo backtracking;
//! converged when the gradient infinity-norm drops to 1e-8. The ridge term
//! makes the Hessian positive definite, so the Cholesky solve never fails.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::{cholesky, cholesky_solve, Matrix};
use crate::math;

const GRAD_TOL: f64 = 1e-8;
const MAX_ITER: usize = 100;

#[derive(Debug, Clone)]
pub struct LogRegModel {
    /// Feature weights, length d.
    pub w: Vec<f64>,
    pub b: f64,
    pub converged: bool,
}

impl LogRegModel {
    pub fn decision(&self, x: &[f64]) -> f64 {
        math::dot(&self.w, x) + self.b
    }

    pub fn proba_pos(&self, x: &[f64]) -> f64 {
        math::sigmoid(self.decision(x))
    }
}

fn loss(x: &Matrix, y: &[f64], w: &[f64], b: f64, c: f64) -> f64 {
    let mut l = 0.0;
    for r in 0..x.rows() {
        let z = math::dot(w, x.row(r)) + b;
        l += math::log1p_exp(-y[r] * z);
    }
    l + math::dot(w, w) / (2.0 * c)
}

pub fn fit(x: &Matrix, y: &[f64], c: f64) -> LogRegModel {
    assert!(c > 0.0, "C must be positive");
    let n = x.rows();
    let d = x.cols();
    let mut w = vec![0.0; d];
    let mut b = 0.0;
    let mut converged = false;

    for _ in 0..MAX_ITER {
        // Gradient and Hessian of the loss at (w, b).
        let mut grad = vec![0.0; d + 1];
        let mut hess = Matrix::zeros(d + 1, d + 1);
        for r in 0..n {
            let row = x.row(r);
            let z = math::dot(&w, row) + b;
            let p = math::sigmoid(z);
            let t = if y[r] > 0.0 { 1.0 } else { 0.0 };
            let g = p - t;
            let s = (p * (1.0 - p)).max(1e-12);
            for j in 0..d {
                grad[j] += g * row[j];
            }
            grad[d] += g;
            for j in 0..d {
                let sj = s * row[j];
                for k in j..d {
                    hess.set(j, k, hess.get(j, k) + sj * row[k]);
                }
                hess.set(j, d, hess.get(j, d) + sj);
            }
            hess.set(d, d, hess.get(d, d) + s);
        }
        for j in 0..d {
            grad[j] += w[j] / c;
            hess.set(j, j, hess.get(j, j) + 1.0 / c);
        }
        // Mirror the upper triangle.
        for j in 0..=d {
            for k in (j + 1)..=d {
                hess.set(k, j, hess.get(j, k));
            }
        }

        let gmax = grad.iter().fold(0.0f64, |m, g| m.max(math::abs(*g)));
        if gmax <= GRAD_TOL {
            converged = true;
            break;
        }

        let l = cholesky(&hess, 0.0).expect("ridge keeps the Hessian positive definite");
        let step = cholesky_solve(&l, &grad);

        // Armijo backtracking on the full Newton step.
        let f0 = loss(x, y, &w, b, c);
        let slope: f64 = -math::dot(&grad, &step);
        let mut lambda = 1.0;
        loop {
            let wt: Vec<f64> = w
                .iter()
                .zip(&step)
                .map(|(wi, si)| wi - lambda * si)
                .collect();
            let bt = b - lambda * step[d];
            if loss(x, y, &wt, bt, c) <= f0 + 1e-4 * lambda * slope || lambda < 1e-10 {
                w = wt;
                b = bt;
                break;
            }
            lambda *= 0.5;
        }
    }

    LogRegModel { w, b, converged }
}

/// Infinity-norm of the objective gradient at the fitted parameters.
pub fn gradient_norm(x: &Matrix, y: &[f64], model: &LogRegModel, c: f64) -> f64 {
    let d = x.cols();
    let mut grad = vec![0.0; d + 1];
    for r in 0..x.rows() {
        let row = x.row(r);
        let p = math::sigmoid(math::dot(&model.w, row) + model.b);
        let t = if y[r] > 0.0 { 1.0 } else { 0.0 };
        for j in 0..d {
            grad[j] += (p - t) * row[j];
        }
        grad[d] += p - t;
    }
    for j in 0..d {
        grad[j] += model.w[j] / c;
    }
    grad.iter().fold(0.0f64, |m, g| m.max(math::abs(*g)))
}
