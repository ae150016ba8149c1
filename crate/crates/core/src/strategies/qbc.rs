//! Query by committee with vote entropy.
//!
//! The default committee is LR(C=1), SVM(linear), SVM(RBF), and LDA. Each
//! member votes a hard label per candidate; disagreement is the entropy of
//! the vote split, so a 2-vs-2 split scores ln 2 and unanimity scores 0.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::CoreError;
use crate::learners::{self, LearnerSpec};
use crate::math;
use crate::rng::TrialRng;

use super::uncertainty::Uniform;
use super::{Strategy, StrategyContext};

pub struct Qbc {
    committee: Vec<LearnerSpec>,
    note: Option<String>,
}

impl Qbc {
    pub fn default_committee() -> Qbc {
        Qbc::with_committee(alloc::vec![
            LearnerSpec::lr(1.0),
            LearnerSpec::svm_linear(1.0),
            LearnerSpec::svm_rbf(1.0),
            LearnerSpec::lda(),
        ])
    }

    pub fn with_committee(committee: Vec<LearnerSpec>) -> Qbc {
        assert!(committee.len() >= 2, "committee needs at least two members");
        Qbc {
            committee,
            note: None,
        }
    }
}

impl Strategy for Qbc {
    fn name(&self) -> &'static str {
        "qbc"
    }

    fn select(&mut self, ctx: &StrategyContext, rng: &mut TrialRng) -> Result<usize, CoreError> {
        let mut members = Vec::new();
        for spec in &self.committee {
            if let Ok(m) = learners::train(spec, ctx.x_labeled, ctx.y_labeled) { members.push(m) }
        }
        if members.len() < 2 {
            self.note = Some(String::from(
                "qbc committee collapsed; fell back to uniform",
            ));
            return Uniform.select(ctx, rng);
        }
        let k = members.len() as f64;
        let scores: Vec<f64> = (0..ctx.x_unlabeled.rows())
            .map(|r| {
                let row = ctx.x_unlabeled.row(r);
                let pos = members.iter().filter(|m| m.predict(row) > 0.0).count();
                math::binary_entropy(pos as f64 / k)
            })
            .collect();
        Ok(ctx.unlabeled_idx[math::argmax(&scores)])
    }

    fn take_note(&mut self) -> Option<String> {
        self.note.take()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;
    use crate::rng::rng_from;

    #[test]
    fn vote_entropy_extremes() {
        assert_eq!(math::binary_entropy(1.0), 0.0);
        assert!((math::binary_entropy(0.5) - core::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn unanimous_pool_falls_to_lowest_index() {
        // A cleanly separable pool far from every candidate: all members
        // agree everywhere, every disagreement is 0, so the tie-break
        // yields the first candidate.
        let x_l = Matrix::from_rows(&[
            alloc::vec![2.0, 0.0],
            alloc::vec![3.0, 0.0],
            alloc::vec![-2.0, 0.0],
            alloc::vec![-3.0, 0.0],
        ]);
        let y_l = [1.0, 1.0, -1.0, -1.0];
        let li = [0usize, 1, 2, 3];
        let x_u = Matrix::from_rows(&[
            alloc::vec![4.0, 0.0],
            alloc::vec![5.0, 0.0],
            alloc::vec![6.0, 0.0],
        ]);
        let ui = [4usize, 5, 6];
        let spec = LearnerSpec::default_model();
        let ctx = StrategyContext {
            x_labeled: &x_l,
            y_labeled: &y_l,
            labeled_idx: &li,
            x_unlabeled: &x_u,
            unlabeled_idx: &ui,
            query_spec: &spec,
            task_spec: &spec,
            task_model: None,
            batch: 1,
        };
        let mut s = Qbc::default_committee();
        let got = s.select(&ctx, &mut rng_from(0)).unwrap();
        assert_eq!(got, 4);
        assert!(s.take_note().is_none());
    }

    #[test]
    fn identical_deterministic_members_are_equivalent_to_tie_break() {
        // Committee of two identical LR specs: votes always agree, so the
        // selection is the lowest-index candidate regardless of geometry.
        let x_l = Matrix::from_rows(&[
            alloc::vec![1.0],
            alloc::vec![2.0],
            alloc::vec![-1.0],
            alloc::vec![-2.0],
        ]);
        let y_l = [1.0, 1.0, -1.0, -1.0];
        let li = [0usize, 1, 2, 3];
        let x_u = Matrix::from_rows(&[alloc::vec![0.3], alloc::vec![-0.05], alloc::vec![0.8]]);
        let ui = [7usize, 9, 11];
        let spec = LearnerSpec::default_model();
        let ctx = StrategyContext {
            x_labeled: &x_l,
            y_labeled: &y_l,
            labeled_idx: &li,
            x_unlabeled: &x_u,
            unlabeled_idx: &ui,
            query_spec: &spec,
            task_spec: &spec,
            task_model: None,
            batch: 1,
        };
        let mut s = Qbc::with_committee(alloc::vec![LearnerSpec::lr(1.0), LearnerSpec::lr(1.0)]);
        assert_eq!(s.select(&ctx, &mut rng_from(0)).unwrap(), 7);
    }

    #[test]
    fn split_votes_beat_unanimity() {
        // Candidate 0 sits where LR/LDA (linear) and SVM-RBF disagree is
        // hard to force robustly, so instead check the scoring directly:
        // a synthetic 2-2 split must dominate 4-0 and 3-1.
        let k = 4.0;
        let two_two = math::binary_entropy(2.0 / k);
        let three_one = math::binary_entropy(3.0 / k);
        let four_zero = math::binary_entropy(4.0 / k);
        assert!(two_two > three_one && three_one > four_zero);
    }
}
