//! Quadratic-programming plumbing for the kernel strategies: PSD repair
//! of kernel matrices, Euclidean projection onto the weighted capped
//! simplex {a in [0,1]^n : e.a = b}, and a fixed-step projected-gradient
//! solver for convex box-simplex QPs.

use alloc::vec::Vec;

use crate::error::CoreError;
use crate::linalg::{self, Matrix};
use crate::math;

/// Symmetrizes K and adds the smallest ridge from 1e-15, 1e-14, ..., 1e-6
/// that makes the result positive definite (gated by a pivoted Cholesky).
/// Failing at the cap is a numeric error carrying the smallest eigenvalue
/// actually achieved.
pub fn stabilize_kernel(k: &Matrix) -> Result<Matrix, CoreError> {
    let n = k.rows();
    assert_eq!(n, k.cols(), "kernel must be square");
    let mut sym = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            sym.set(i, j, 0.5 * (k.get(i, j) + k.get(j, i)));
        }
    }
    let mean_diag = (0..n).map(|i| math::abs(sym.get(i, i))).sum::<f64>() / n.max(1) as f64;
    let pivot_margin = (1e-12 * mean_diag).max(1e-300);

    let mut eps = 1e-15;
    loop {
        let mut cand = sym.clone();
        for i in 0..n {
            cand.set(i, i, cand.get(i, i) + eps);
        }
        if linalg::cholesky(&cand, pivot_margin).is_some() {
            return Ok(cand);
        }
        if eps >= 1e-6 {
            let eigs = linalg::symmetric_eigenvalues(&cand);
            return Err(CoreError::Numeric {
                context: "kernel stabilization hit the ridge cap",
                value: eigs.first().copied().unwrap_or(f64::NAN),
            });
        }
        eps *= 10.0;
    }
}

/// Euclidean projection of v onto {a in [0,1]^n : sum e_i a_i = b} with
/// strictly positive weights e. Solved by bisection on the Lagrange
/// multiplier of the equality constraint.
pub fn project_capped_simplex(v: &[f64], e: &[f64], b: f64) -> Vec<f64> {
    let n = v.len();
    assert_eq!(n, e.len());
    assert!(e.iter().all(|&w| w > 0.0), "weights must be positive");
    let capacity: f64 = e.iter().sum();
    assert!(b >= 0.0 && b <= capacity, "infeasible constraint level");

    let clip = |theta: f64| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            let a = (v[i] - theta * e[i]).clamp(0.0, 1.0);
            s += e[i] * a;
        }
        s
    };

    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        lo = lo.min((v[i] - 1.0) / e[i]);
        hi = hi.max(v[i] / e[i]);
    }
    // clip(lo) = capacity >= b and clip(hi) = 0 <= b; bisect the
    // continuous nonincreasing curve.
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if clip(mid) >= b {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let theta = 0.5 * (lo + hi);
    (0..n)
        .map(|i| (v[i] - theta * e[i]).clamp(0.0, 1.0))
        .collect()
}

/// Minimizes 0.5 a'Qa + lin'a over the weighted capped simplex with
/// fixed-step projected gradient descent (step 1/L, L a Gershgorin bound
/// on Q's spectrum). Stops after `max_iter` rounds or when the iterate
/// moves less than `tol` in Euclidean norm.
pub fn pgd_box_simplex(
    q: &Matrix,
    lin: &[f64],
    e: &[f64],
    b: f64,
    max_iter: usize,
    tol: f64,
) -> Vec<f64> {
    let n = lin.len();
    assert_eq!(q.rows(), n);
    assert_eq!(q.cols(), n);
    let mut l = 0.0f64;
    for i in 0..n {
        let row_sum: f64 = (0..n).map(|j| math::abs(q.get(i, j))).sum();
        l = l.max(row_sum);
    }
    let step = if l > 0.0 { 1.0 / l } else { 1.0 };

    let capacity: f64 = e.iter().sum();
    let mut alpha = alloc::vec![b / capacity; n];
    let mut grad = alloc::vec![0.0f64; n];
    for _ in 0..max_iter {
        for i in 0..n {
            grad[i] = lin[i] + math::dot(q.row(i), &alpha);
        }
        let target: Vec<f64> = (0..n).map(|i| alpha[i] - step * grad[i]).collect();
        let next = project_capped_simplex(&target, e, b);
        let delta: f64 = next
            .iter()
            .zip(&alpha)
            .map(|(a, c)| (a - c) * (a - c))
            .sum::<f64>();
        alpha = next;
        if math::sqrt(delta) <= tol {
            break;
        }
    }
    alpha
}
