//! Random forest of CART trees: bootstrap row sampling, Gini impurity,
//! sqrt(d) feature candidates per split, midpoint thresholds, unlimited
//! depth, leaves down to one sample.
//!
//! The forest probability of +1 is the fraction of trees voting +1 and the
//! decision value is 2p - 1, so a 50/50 vote predicts +1 like every other
//! tie at decision 0. Fits are seeded and deterministic; unlike the other
//! kinds, predictions legitimately depend on training row order through
//! the bootstrap, which is why permutation invariance is not promised for
//! forests.

use alloc::vec::Vec;

use rand::Rng;

use crate::linalg::Matrix;
use crate::math;
use crate::rng::{self, hash64};

#[derive(Debug, Clone)]
enum Node {
    Leaf {
        label: f64,
    },
    Split {
        feat: usize,
        thresh: f64,
        left: usize,
        right: usize,
    },
}

#[derive(Debug, Clone)]
pub struct Tree {
    nodes: Vec<Node>,
}

impl Tree {
    fn predict(&self, x: &[f64]) -> f64 {
        let mut at = 0usize;
        loop {
            match self.nodes[at] {
                Node::Leaf { label } => return label,
                Node::Split {
                    feat,
                    thresh,
                    left,
                    right,
                } => {
                    at = if x[feat] <= thresh { left } else { right };
                }
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct ForestModel {
    pub trees: Vec<Tree>,
}

impl ForestModel {
    pub fn proba_pos(&self, x: &[f64]) -> f64 {
        let pos = self.trees.iter().filter(|t| t.predict(x) > 0.0).count();
        pos as f64 / self.trees.len() as f64
    }

    pub fn decision(&self, x: &[f64]) -> f64 {
        2.0 * self.proba_pos(x) - 1.0
    }
}

pub fn fit(x: &Matrix, y: &[f64], n_trees: usize, seed: u64) -> ForestModel {
    assert!(n_trees >= 1, "forest needs at least one tree");
    let n = x.rows();
    let mut trees = Vec::with_capacity(n_trees);
    for t in 0..n_trees {
        let tree_seed = hash64(&[&seed.to_le_bytes(), &(t as u64).to_le_bytes()]);
        let mut tree_rng = rng::rng_from(tree_seed);
        let sample: Vec<usize> = (0..n).map(|_| tree_rng.gen_range(0..n)).collect();
        let mut tree = Tree { nodes: Vec::new() };
        build_node(x, y, sample, &mut tree.nodes, &mut tree_rng);
        trees.push(tree);
    }
    ForestModel { trees }
}

fn majority(y: &[f64], sample: &[usize]) -> f64 {
    let pos = sample.iter().filter(|&&i| y[i] > 0.0).count();
    if 2 * pos >= sample.len() {
        1.0
    } else {
        -1.0
    }
}

fn build_node(
    x: &Matrix,
    y: &[f64],
    sample: Vec<usize>,
    nodes: &mut Vec<Node>,
    tree_rng: &mut rng::TrialRng,
) -> usize {
    let me = nodes.len();
    nodes.push(Node::Leaf { label: 0.0 });

    let pos = sample.iter().filter(|&&i| y[i] > 0.0).count();
    if pos == 0 || pos == sample.len() {
        nodes[me] = Node::Leaf {
            label: if pos > 0 { 1.0 } else { -1.0 },
        };
        return me;
    }

    let d = x.cols();
    let k = isqrt(d).max(1);
    let candidates = rng::sample_without_replacement(d, k, tree_rng);
    let mut best = best_split(x, y, &sample, &candidates);
    if best.is_none() && k < d {
        // The sampled features were all constant on this node; scan the
        // full feature range before giving up.
        let all: Vec<usize> = (0..d).collect();
        best = best_split(x, y, &sample, &all);
    }

    match best {
        None => {
            nodes[me] = Node::Leaf {
                label: majority(y, &sample),
            };
        }
        Some((feat, thresh)) => {
            let (mut left, mut right) = (Vec::new(), Vec::new());
            for &i in &sample {
                if x.get(i, feat) <= thresh {
                    left.push(i);
                } else {
                    right.push(i);
                }
            }
            let l = build_node(x, y, left, nodes, tree_rng);
            let r = build_node(x, y, right, nodes, tree_rng);
            nodes[me] = Node::Split {
                feat,
                thresh,
                left: l,
                right: r,
            };
        }
    }
    me
}

/// Best (feature, midpoint threshold) by weighted Gini impurity over the
/// candidate features, ascending feature order, strict improvement wins
/// ties toward the earliest candidate. None when no candidate separates.
fn best_split(
    x: &Matrix,
    y: &[f64],
    sample: &[usize],
    candidates: &[usize],
) -> Option<(usize, f64)> {
    let n = sample.len() as f64;
    let mut best: Option<(usize, f64)> = None;
    let mut best_score = f64::INFINITY;
    let mut order: Vec<usize> = sample.to_vec();
    for &feat in candidates {
        order.sort_unstable_by(|&a, &b| {
            x.get(a, feat)
                .partial_cmp(&x.get(b, feat))
                .expect("finite features")
        });
        let total_pos = order.iter().filter(|&&i| y[i] > 0.0).count() as f64;
        let mut left_pos = 0.0;
        for (cut, &i) in order.iter().enumerate() {
            if y[i] > 0.0 {
                left_pos += 1.0;
            }
            let next = cut + 1;
            if next == order.len() {
                break;
            }
            let a = x.get(i, feat);
            let b = x.get(order[next], feat);
            if a == b {
                continue;
            }
            let nl = next as f64;
            let nr = n - nl;
            let pl = left_pos / nl;
            let pr = (total_pos - left_pos) / nr;
            let gini = nl * 2.0 * pl * (1.0 - pl) + nr * 2.0 * pr * (1.0 - pr);
            if gini < best_score {
                best_score = gini;
                best = Some((feat, 0.5 * (a + b)));
            }
        }
    }
    best
}

fn isqrt(n: usize) -> usize {
    let r = math::sqrt(n as f64) as usize;
    // Guard against floating-point undershoot/overshoot.
    if (r + 1) * (r + 1) <= n {
        r + 1
    } else if r * r > n {
        r - 1
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learners::{accuracy, train, LearnerSpec, Model};

    fn blobs() -> (Matrix, Vec<f64>) {
        let mut rows = Vec::new();
        let mut y = Vec::new();
        let mut r = rng::rng_from(11);
        for _ in 0..30 {
            rows.push(vec![2.0 + r.gen::<f64>(), 2.0 + r.gen::<f64>()]);
            y.push(1.0);
            rows.push(vec![-2.0 - r.gen::<f64>(), -2.0 - r.gen::<f64>()]);
            y.push(-1.0);
        }
        (Matrix::from_rows(&rows), y)
    }

    #[test]
    fn separates_blobs() {
        let (x, y) = blobs();
        let m = fit(&x, &y, 25, 7);
        for r in 0..x.rows() {
            assert_eq!(
                if m.decision(x.row(r)) >= 0.0 {
                    1.0
                } else {
                    -1.0
                },
                y[r]
            );
        }
    }

    #[test]
    fn same_seed_same_forest_different_seed_may_differ() {
        let (x, y) = blobs();
        let spec = LearnerSpec::rf(15).with_seed(42);
        let a = train(&spec, &x, &y).unwrap();
        let b = train(&spec, &x, &y).unwrap();
        let probe = vec![0.3, -0.1];
        assert_eq!(a.proba_pos(&probe), b.proba_pos(&probe));
        match (&a, &b) {
            (Model::Forest(fa), Model::Forest(fb)) => {
                assert_eq!(fa.trees.len(), fb.trees.len());
            }
            _ => panic!("expected forests"),
        }
    }

    #[test]
    fn unanimous_votes_give_extreme_probabilities() {
        let (x, y) = blobs();
        let m = fit(&x, &y, 20, 3);
        assert_eq!(m.proba_pos(&[3.0, 3.0]), 1.0);
        assert_eq!(m.proba_pos(&[-3.0, -3.0]), 0.0);
    }

    #[test]
    fn fits_single_feature_data() {
        let x = Matrix::from_rows(&[vec![0.0], vec![1.0], vec![2.0], vec![3.0]]);
        let y = [-1.0, -1.0, 1.0, 1.0];
        let spec = LearnerSpec::rf(30).with_seed(5);
        let m = train(&spec, &x, &y).unwrap();
        assert!(accuracy(&m, &x, &y) >= 0.75);
    }

    #[test]
    fn isqrt_is_exact() {
        for n in 1..200usize {
            let r = isqrt(n);
            assert!(r * r <= n && (r + 1) * (r + 1) > n, "isqrt({n}) = {r}");
        }
    }
}
