//! Seeded k-means with k-means++ initialization (Lloyd iterations).
//!
//! Deterministic given the RNG state: candidate scans break ties toward
//! the lowest index, empty clusters are refilled with the point farthest
//! from its assigned center.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::Matrix;
use crate::math;
use crate::rng::{self, TrialRng};

const MAX_ITERS: usize = 100;

pub struct KMeansResult {
    pub centers: Matrix,
    pub assign: Vec<usize>,
}

pub fn kmeans(x: &Matrix, k: usize, rng: &mut TrialRng) -> KMeansResult {
    let n = x.rows();
    assert!(k >= 1 && k <= n, "k must be in 1..=n");
    let d = x.cols();

    // k-means++ seeding: first center uniform, then proportional to the
    // squared distance to the closest chosen center.
    let mut center_rows: Vec<usize> = Vec::with_capacity(k);
    center_rows.push(rng::uniform_index(n, rng));
    let mut d2: Vec<f64> = (0..n)
        .map(|i| math::squared_distance(x.row(i), x.row(center_rows[0])))
        .collect();
    while center_rows.len() < k {
        let total: f64 = d2.iter().sum();
        let next = if total <= 0.0 {
            // All remaining mass is on already-chosen duplicates; take the
            // lowest-index unchosen row.
            (0..n).find(|i| !center_rows.contains(i)).expect("k <= n")
        } else {
            let mut target = rng::uniform_f64(rng) * total;
            let mut pick = n - 1;
            for (i, &w) in d2.iter().enumerate() {
                target -= w;
                if target <= 0.0 {
                    pick = i;
                    break;
                }
            }
            pick
        };
        center_rows.push(next);
        for i in 0..n {
            let nd = math::squared_distance(x.row(i), x.row(next));
            if nd < d2[i] {
                d2[i] = nd;
            }
        }
    }

    let mut centers = x.select_rows(&center_rows);
    let mut assign = vec![0usize; n];
    for _ in 0..MAX_ITERS {
        // Assignment step; ties go to the lowest cluster id.
        let mut changed = false;
        for i in 0..n {
            let mut best = 0usize;
            let mut best_d = f64::INFINITY;
            for c in 0..k {
                let dist = math::squared_distance(x.row(i), centers.row(c));
                if dist < best_d {
                    best_d = dist;
                    best = c;
                }
            }
            if assign[i] != best {
                assign[i] = best;
                changed = true;
            }
        }

        // Refill empty clusters with the globally farthest point.
        loop {
            let mut counts = vec![0usize; k];
            for &a in &assign {
                counts[a] += 1;
            }
            let Some(empty) = counts.iter().position(|&c| c == 0) else {
                break;
            };
            let mut far = 0usize;
            let mut far_d = f64::NEG_INFINITY;
            for i in 0..n {
                if counts[assign[i]] <= 1 {
                    continue;
                }
                let dist = math::squared_distance(x.row(i), centers.row(assign[i]));
                if dist > far_d {
                    far_d = dist;
                    far = i;
                }
            }
            assign[far] = empty;
            changed = true;
            for j in 0..d {
                centers.set(empty, j, x.get(far, j));
            }
        }

        if !changed {
            break;
        }

        // Update step: cluster means.
        let mut sums = Matrix::zeros(k, d);
        let mut counts = vec![0usize; k];
        for i in 0..n {
            counts[assign[i]] += 1;
            for j in 0..d {
                sums.set(assign[i], j, sums.get(assign[i], j) + x.get(i, j));
            }
        }
        for c in 0..k {
            for j in 0..d {
                centers.set(c, j, sums.get(c, j) / counts[c] as f64);
            }
        }
    }

    KMeansResult { centers, assign }
}
