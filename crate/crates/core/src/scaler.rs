//! Feature standardization: mean removal and unit-variance scaling, fit on
//! the training rows only and applied to both sides of the split.
//!
//! The scaler uses the population standard deviation (divide by n), a
//! convention fixed so independent reimplementations agree to 1e-12 on
//! shared fixtures. Zero-variance columns map to all zeros on both train
//! and test.

use alloc::vec::Vec;

use crate::linalg::Matrix;
use crate::math;

#[derive(Debug, Clone)]
pub struct Standardizer {
    pub mean: Vec<f64>,
    /// Population SD per column; 0 marks a constant column.
    pub sd: Vec<f64>,
}

pub fn fit(train: &Matrix) -> Standardizer {
    let n = train.rows();
    assert!(n > 0, "scaler needs at least one training row");
    let d = train.cols();
    let mut mean = alloc::vec![0.0; d];
    for r in 0..n {
        for (m, v) in mean.iter_mut().zip(train.row(r)) {
            *m += v;
        }
    }
    for m in mean.iter_mut() {
        *m /= n as f64;
    }
    let mut var = alloc::vec![0.0; d];
    for r in 0..n {
        for c in 0..d {
            let dv = train.get(r, c) - mean[c];
            var[c] += dv * dv;
        }
    }
    let sd: Vec<f64> = var.iter().map(|&v| math::sqrt(v / n as f64)).collect();
    Standardizer { mean, sd }
}

impl Standardizer {
    pub fn transform(&self, m: &mut Matrix) {
        assert_eq!(m.cols(), self.mean.len());
        for r in 0..m.rows() {
            let row = m.row_mut(r);
            for (c, v) in row.iter_mut().enumerate() {
                *v = if self.sd[c] == 0.0 {
                    0.0
                } else {
                    (*v - self.mean[c]) / self.sd[c]
                };
            }
        }
    }
}

/// Fits on `train`, transforms both matrices in place, returns the scaler.
pub fn standardize(train: &mut Matrix, test: &mut Matrix) -> Standardizer {
    let s = fit(train);
    s.transform(train);
    s.transform(test);
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_point_column_maps_to_unit_values() {
        let mut train = Matrix::from_rows(&[alloc::vec![0.0], alloc::vec![2.0]]);
        let mut test = Matrix::from_rows(&[alloc::vec![4.0]]);
        standardize(&mut train, &mut test);
        assert!((train.get(0, 0) + 1.0).abs() < 1e-15);
        assert!((train.get(1, 0) - 1.0).abs() < 1e-15);
        // Test value 4 under train stats (mean 1, population SD 1) -> 3.
        assert!((test.get(0, 0) - 3.0).abs() < 1e-15);
    }

    #[test]
    fn constant_columns_become_zero_on_both_sides() {
        let mut train = Matrix::from_rows(&[alloc::vec![5.0, 1.0], alloc::vec![5.0, 3.0]]);
        let mut test = Matrix::from_rows(&[alloc::vec![7.0, 2.0]]);
        standardize(&mut train, &mut test);
        assert_eq!(train.get(0, 0), 0.0);
        assert_eq!(train.get(1, 0), 0.0);
        assert_eq!(test.get(0, 0), 0.0);
        assert!(test.get(0, 1).is_finite());
    }

    #[test]
    fn train_columns_have_zero_mean_unit_sd() {
        let mut train = Matrix::from_rows(&[
            alloc::vec![1.0, 10.0],
            alloc::vec![2.0, -3.0],
            alloc::vec![4.0, 0.5],
            alloc::vec![8.0, 2.0],
        ]);
        let mut test = Matrix::zeros(0, 2);
        standardize(&mut train, &mut test);
        for c in 0..2 {
            let vals: Vec<f64> = (0..4).map(|r| train.get(r, c)).collect();
            let mean = crate::math::mean(&vals);
            let var: f64 = vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / 4.0;
            assert!(mean.abs() < 1e-9);
            assert!((var - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn standardizing_twice_is_idempotent() {
        let mut train = Matrix::from_rows(&[
            alloc::vec![1.0, 2.0],
            alloc::vec![3.0, -1.0],
            alloc::vec![-2.0, 4.0],
        ]);
        let mut none = Matrix::zeros(0, 2);
        standardize(&mut train, &mut none);
        let once = train.clone();
        standardize(&mut train, &mut none);
        for r in 0..train.rows() {
            for c in 0..train.cols() {
                assert!((train.get(r, c) - once.get(r, c)).abs() <= 1e-9);
            }
        }
    }
}
