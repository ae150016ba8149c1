//! Sigmoid calibration of decision values into probabilities:
//! p(+1 | f) = 1 / (1 + exp(A f + B)) with A < 0 so that larger decision
//! values mean larger probabilities.
//!
//! The (A, B) pair minimizes the regularized log-loss on the training
//! decision values with the usual smoothed targets (N+1)/(N+2) and
//! 1/(N+2); no inner cross-validation is used, which is cheap and adequate
//! at the pool sizes involved but slightly optimistic about the training
//! fit. Degenerate fits (constant decisions, or a fit that fails to orient
//! A negative) fall back to the class prior.

use alloc::vec::Vec;

use crate::math;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Calibration {
    Sigmoid {
        a: f64,
        b: f64,
    },
    /// Constant probability of the +1 class.
    Prior(f64),
}

impl Calibration {
    pub fn proba_pos(&self, f: f64) -> f64 {
        match *self {
            Calibration::Sigmoid { a, b } => {
                // 1/(1+exp(a*f+b)), stable in both tails.
                math::sigmoid(-(a * f + b))
            }
            Calibration::Prior(p) => p,
        }
    }
}

pub fn fit(decisions: &[f64], y: &[f64]) -> Calibration {
    assert_eq!(decisions.len(), y.len());
    let n_pos = y.iter().filter(|&&v| v > 0.0).count();
    let n_neg = y.len() - n_pos;
    let prior = n_pos as f64 / y.len().max(1) as f64;
    if n_pos == 0 || n_neg == 0 {
        return Calibration::Prior(prior);
    }
    let spread = decisions
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    if !(spread.1 - spread.0).is_finite() || spread.1 - spread.0 < 1e-12 {
        return Calibration::Prior(prior);
    }

    let t_pos = (n_pos as f64 + 1.0) / (n_pos as f64 + 2.0);
    let t_neg = 1.0 / (n_neg as f64 + 2.0);
    let targets: Vec<f64> = y
        .iter()
        .map(|&v| if v > 0.0 { t_pos } else { t_neg })
        .collect();

    // Newton iterations on F(A,B) = -sum t log p + (1-t) log(1-p).
    let mut a = 0.0;
    let mut b = math::ln((n_neg as f64 + 1.0) / (n_pos as f64 + 1.0));
    let objective = |a: f64, b: f64| -> f64 {
        let mut o = 0.0;
        for (f, t) in decisions.iter().zip(&targets) {
            // With p = sigmoid(-z): -ln p = log1p_exp(z), -ln(1-p) = log1p_exp(-z).
            let z = a * f + b;
            o += t * math::log1p_exp(z) + (1.0 - t) * math::log1p_exp(-z);
        }
        o
    };
    let mut fval = objective(a, b);
    for _ in 0..100 {
        let (mut g1, mut g2) = (0.0, 0.0);
        let (mut h11, mut h12, mut h22) = (1e-12, 0.0, 1e-12);
        for (f, t) in decisions.iter().zip(&targets) {
            let z = a * f + b;
            let p = math::sigmoid(-z);
            let q = 1.0 - p;
            let d1 = t - p;
            let d2 = p * q;
            g1 += f * d1;
            g2 += d1;
            h11 += f * f * d2;
            h12 += f * d2;
            h22 += d2;
        }
        if math::abs(g1) < 1e-10 && math::abs(g2) < 1e-10 {
            break;
        }
        let det = h11 * h22 - h12 * h12;
        let da = -(h22 * g1 - h12 * g2) / det;
        let db = -(-h12 * g1 + h11 * g2) / det;
        let slope = g1 * da + g2 * db;
        let mut step = 1.0;
        loop {
            let (an, bn) = (a + step * da, b + step * db);
            let fn_ = objective(an, bn);
            if fn_ <= fval + 1e-4 * step * slope || step < 1e-10 {
                a = an;
                b = bn;
                fval = fn_;
                break;
            }
            step *= 0.5;
        }
    }

    if a < 0.0 && a.is_finite() && b.is_finite() {
        Calibration::Sigmoid { a, b }
    } else {
        Calibration::Prior(prior)
    }
}
