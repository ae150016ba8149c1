//! Linear discriminant analysis with a pooled within-class covariance.
//!
//! The covariance is the biased (divide by n) pooled scatter plus a 1e-6
//! ridge on the diagonal so it stays invertible on degenerate pools. The
//! decision is w.x + b with w = S^-1 (mu+ - mu-) and
//! b = -(mu+ + mu-).w / 2 + ln(n+ / n-); the positive-class probability is
//! the logistic of the decision value.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::{self, Matrix};
use crate::math;

const RIDGE: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct LdaModel {
    pub w: Vec<f64>,
    pub b: f64,
}

impl LdaModel {
    pub fn decision(&self, x: &[f64]) -> f64 {
        math::dot(&self.w, x) + self.b
    }

    pub fn proba_pos(&self, x: &[f64]) -> f64 {
        math::sigmoid(self.decision(x))
    }
}

pub fn fit(x: &Matrix, y: &[f64]) -> LdaModel {
    let (n, d) = (x.rows(), x.cols());
    let n_pos = y.iter().filter(|&&v| v > 0.0).count();
    let n_neg = n - n_pos;
    assert!(n_pos > 0 && n_neg > 0, "lda requires both classes");

    let mut mu_pos = vec![0.0; d];
    let mut mu_neg = vec![0.0; d];
    for i in 0..n {
        let mu = if y[i] > 0.0 { &mut mu_pos } else { &mut mu_neg };
        for (m, &v) in mu.iter_mut().zip(x.row(i)) {
            *m += v;
        }
    }
    for m in mu_pos.iter_mut() {
        *m /= n_pos as f64;
    }
    for m in mu_neg.iter_mut() {
        *m /= n_neg as f64;
    }

    let mut scatter = Matrix::zeros(d, d);
    let mut centered = vec![0.0; d];
    for i in 0..n {
        let mu = if y[i] > 0.0 { &mu_pos } else { &mu_neg };
        for (c, (&v, &m)) in centered.iter_mut().zip(x.row(i).iter().zip(mu)) {
            *c = v - m;
        }
        for a in 0..d {
            for b in a..d {
                let add = centered[a] * centered[b];
                scatter.set(a, b, scatter.get(a, b) + add);
            }
        }
    }
    for a in 0..d {
        for b in a..d {
            let v = scatter.get(a, b) / n as f64;
            scatter.set(a, b, v + if a == b { RIDGE } else { 0.0 });
            scatter.set(b, a, scatter.get(a, b));
        }
    }

    let diff: Vec<f64> = mu_pos.iter().zip(&mu_neg).map(|(p, q)| p - q).collect();
    let w = linalg::solve_spd(&scatter, &diff).expect("ridged covariance is positive definite");
    let mid: Vec<f64> = mu_pos
        .iter()
        .zip(&mu_neg)
        .map(|(p, q)| 0.5 * (p + q))
        .collect();
    let b = -math::dot(&mid, &w) + math::ln(n_pos as f64 / n_neg as f64);
    LdaModel { w, b }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_computed_univariate() {
        // Two points per class at +/-1 around means +/-2: mu+ = 2, mu- = -2,
        // pooled biased variance = ((-1)^2 + 1 + 1 + 1)/4 = 1, so
        // w = (2 - (-2)) / (1 + 1e-6) and b = ln(1) - 0 = 0.
        let x = Matrix::from_rows(&[vec![1.0], vec![3.0], vec![-1.0], vec![-3.0]]);
        let y = [1.0, 1.0, -1.0, -1.0];
        let m = fit(&x, &y);
        assert!((m.w[0] - 4.0 / (1.0 + RIDGE)).abs() < 1e-12);
        assert!(m.b.abs() < 1e-12);
        assert!((m.proba_pos(&[0.0]) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn prior_shifts_intercept() {
        // Same geometry, 4 positives vs 2 negatives: b picks up ln(2).
        let x = Matrix::from_rows(&[
            vec![1.0],
            vec![3.0],
            vec![1.0],
            vec![3.0],
            vec![-1.0],
            vec![-3.0],
        ]);
        let y = [1.0, 1.0, 1.0, 1.0, -1.0, -1.0];
        let m = fit(&x, &y);
        assert!((m.b - math::ln(2.0)).abs() < 1e-9);
        assert!(m.decision(&[0.0]) > 0.0);
    }

    #[test]
    fn separates_correlated_classes() {
        let mut rows = Vec::new();
        let mut y = Vec::new();
        for i in 0..20 {
            let t = i as f64 / 10.0;
            rows.push(vec![1.0 + t, 1.0 + 0.5 * t]);
            y.push(1.0);
            rows.push(vec![-1.0 - t, -1.0 - 0.5 * t]);
            y.push(-1.0);
        }
        let x = Matrix::from_rows(&rows);
        let m = fit(&x, &y);
        for i in 0..x.rows() {
            assert!(m.decision(x.row(i)) * y[i] > 0.0);
        }
    }

    #[test]
    fn survives_constant_feature() {
        // Second feature is constant; the ridge keeps the solve well posed
        // and the constant direction gets (almost) no weight.
        let x = Matrix::from_rows(&[
            vec![1.0, 5.0],
            vec![2.0, 5.0],
            vec![-1.0, 5.0],
            vec![-2.0, 5.0],
        ]);
        let y = [1.0, 1.0, -1.0, -1.0];
        let m = fit(&x, &y);
        assert!(m.w[0] > 0.0);
        assert!(m.w[1].abs() < 1e-6 * m.w[0].abs());
    }
}
