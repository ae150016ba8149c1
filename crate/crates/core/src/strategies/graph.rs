//! Graph-density sampling: pure diversity, no model in the loop.
//!
//! On the first call of a trial a k-NN graph (k = min(10, n-1)) is built
//! over the then-current unlabeled pool with Gaussian edge weights
//! w_ij = exp(-gamma ||x_i - x_j||^2), gamma = 1/d. A node's density is
//! the mean weight to its neighbors. Each round picks the densest
//! not-yet-queried node; the winner's out-neighbors then have their
//! density reduced by the connecting weight so later rounds drift to
//! other regions. State lives for one trial only.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::CoreError;
use crate::math;
use crate::rng::TrialRng;

use super::{Strategy, StrategyContext};

struct GraphState {
    node_global: Vec<usize>,
    neighbors: Vec<Vec<(usize, f64)>>,
    density: Vec<f64>,
    queried: Vec<bool>,
}

pub struct GraphDensity {
    state: Option<GraphState>,
}

impl Default for GraphDensity {
    fn default() -> Self {
        Self::new()
    }
}

impl GraphDensity {
    pub fn new() -> GraphDensity {
        GraphDensity { state: None }
    }

    fn build(ctx: &StrategyContext) -> GraphState {
        let n = ctx.x_unlabeled.rows();
        let gamma = 1.0 / ctx.x_unlabeled.cols().max(1) as f64;
        let k = 10.min(n.saturating_sub(1));
        let mut neighbors = Vec::with_capacity(n);
        let mut density = Vec::with_capacity(n);
        for i in 0..n {
            let mut weighted: Vec<(usize, f64)> = (0..n)
                .filter(|&j| j != i)
                .map(|j| {
                    let w = math::exp(
                        -gamma
                            * math::squared_distance(
                                ctx.x_unlabeled.row(i),
                                ctx.x_unlabeled.row(j),
                            ),
                    );
                    (j, w)
                })
                .collect();
            // Nearest first; equal weights keep index order (stable sort).
            weighted.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
            weighted.truncate(k);
            let dens = if k == 0 {
                0.0
            } else {
                weighted.iter().map(|&(_, w)| w).sum::<f64>() / k as f64
            };
            neighbors.push(weighted);
            density.push(dens);
        }
        GraphState {
            node_global: ctx.unlabeled_idx.to_vec(),
            neighbors,
            density,
            queried: vec![false; n],
        }
    }
}

impl Strategy for GraphDensity {
    fn name(&self) -> &'static str {
        "graph"
    }

    fn select(&mut self, ctx: &StrategyContext, _rng: &mut TrialRng) -> Result<usize, CoreError> {
        if self.state.is_none() {
            self.state = Some(GraphDensity::build(ctx));
        }
        let state = self.state.as_mut().expect("state built above");

        let mut best_node = usize::MAX;
        let mut best = f64::NEG_INFINITY;
        for node in 0..state.node_global.len() {
            if state.queried[node] {
                continue;
            }
            // Only nodes still in the pool are eligible (always true when
            // this strategy is the sole consumer of the pool, but cheap to
            // guarantee).
            if ctx
                .unlabeled_idx
                .binary_search(&state.node_global[node])
                .is_err()
            {
                continue;
            }
            if state.density[node] > best {
                best = state.density[node];
                best_node = node;
            }
        }
        if best_node == usize::MAX {
            return Err(CoreError::InvalidConfig(
                "graph strategy exhausted its node set",
            ));
        }
        state.queried[best_node] = true;
        let picked = state.node_global[best_node];
        let discounts: Vec<(usize, f64)> = state.neighbors[best_node].clone();
        for (j, w) in discounts {
            state.density[j] -= w;
        }
        Ok(picked)
    }
}
