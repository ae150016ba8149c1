//! Scalar math helpers on top of `libm`.
//!
//! Every transcendental used anywhere in the crate is routed through this
//! module so that results are bit-identical with and without the `std`
//! feature and across platforms.

use alloc::vec::Vec;

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn log1p(x: f64) -> f64 {
    libm::log1p(x)
}

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn pow(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

#[inline]
pub fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

#[inline]
pub fn floor(x: f64) -> f64 {
    libm::floor(x)
}

/// Numerically stable log(1 + exp(t)).
#[inline]
pub fn log1p_exp(t: f64) -> f64 {
    if t > 0.0 {
        t + log1p(exp(-t))
    } else {
        log1p(exp(t))
    }
}

/// Numerically stable logistic function 1/(1 + exp(-z)).
#[inline]
pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + exp(-z))
    } else {
        let e = exp(z);
        e / (1.0 + e)
    }
}

/// Binary entropy -p ln p - (1-p) ln(1-p) in nats, with 0 ln 0 = 0.
#[inline]
pub fn binary_entropy(p: f64) -> f64 {
    let mut h = 0.0;
    if p > 0.0 {
        h -= p * ln(p);
    }
    if p < 1.0 {
        h -= (1.0 - p) * ln(1.0 - p);
    }
    h
}

/// Index of the largest value; ties resolve to the lowest index.
/// NaN entries never win.
pub fn argmax(scores: &[f64]) -> usize {
    let mut best = 0;
    let mut best_score = f64::NEG_INFINITY;
    for (i, &s) in scores.iter().enumerate() {
        if s > best_score {
            best_score = s;
            best = i;
        }
    }
    best
}

/// Index of the smallest value; ties resolve to the lowest index.
pub fn argmin(scores: &[f64]) -> usize {
    let mut best = 0;
    let mut best_score = f64::INFINITY;
    for (i, &s) in scores.iter().enumerate() {
        if s < best_score {
            best_score = s;
            best = i;
        }
    }
    best
}

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation (divides by n-1); 0 for fewer than 2 points.
pub fn sample_sd(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    let ss: f64 = xs.iter().map(|x| (x - m) * (x - m)).sum();
    sqrt(ss / (xs.len() - 1) as f64)
}

/// Median of a slice (average of the middle two for even lengths).
pub fn median(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    let mut v: Vec<f64> = xs.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x - y;
            d * d
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigmoid_is_symmetric_and_bounded() {
        assert_eq!(sigmoid(0.0), 0.5);
        for &z in &[-700.0, -30.0, -1.0, 0.3, 40.0, 700.0] {
            let p = sigmoid(z);
            // The lower tail stays strictly positive down to ~-745; the
            // upper tail saturates to exactly 1.0 once exp(-z) < 2^-53.
            assert!(p > 0.0, "sigmoid({z}) underflowed");
            assert!(p < 1.0 || z > 36.0, "sigmoid({z}) saturated early");
            assert!(p <= 1.0);
            assert!((sigmoid(z) + sigmoid(-z) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn log1p_exp_is_stable_in_both_tails() {
        assert!((log1p_exp(0.0) - core::f64::consts::LN_2).abs() < 1e-15);
        assert!((log1p_exp(800.0) - 800.0).abs() < 1e-9);
        assert!(log1p_exp(-800.0) >= 0.0);
        assert!(log1p_exp(-800.0) < 1e-300);
    }

    #[test]
    fn entropy_peaks_at_half() {
        assert_eq!(binary_entropy(0.0), 0.0);
        assert_eq!(binary_entropy(1.0), 0.0);
        assert!((binary_entropy(0.5) - core::f64::consts::LN_2).abs() < 1e-15);
        assert!((binary_entropy(0.9) - 0.325082973391448).abs() < 1e-12);
    }

    #[test]
    fn argmax_breaks_ties_low_and_ignores_nan() {
        assert_eq!(argmax(&[1.0, 3.0, 3.0, 2.0]), 1);
        assert_eq!(argmax(&[f64::NAN, 1.0, 1.0]), 1);
        assert_eq!(argmin(&[2.0, 0.5, 0.5]), 1);
    }

    #[test]
    fn median_handles_even_and_odd() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
    }

    #[test]
    fn sample_sd_two_point_formula() {
        assert!((sample_sd(&[0.7, 0.9]) - 0.1414213562373095).abs() < 1e-12);
        assert_eq!(sample_sd(&[1.0]), 0.0);
    }
}
