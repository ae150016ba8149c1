//! Self-contained classical learners: logistic regression (Newton),
//! SVMs trained by sequential minimal optimization, random forest, and
//! LDA. Each serves both as the evaluated task model and as the query
//! model that strategies consult.
//!
//! Conventions shared by all kinds:
//! - labels are -1.0 / +1.0; a decision value's sign gives the prediction
//!   with ties at exactly 0 predicting +1;
//! - `proba_pos` is a calibrated (or native) probability of the +1 class,
//!   nondecreasing in the decision value;
//! - training on a single-class label vector yields a `Constant` model so
//!   that hypothetical refits (bandit arms, error-reduction lookahead)
//!   never crash.

pub mod forest;
pub mod lda;
pub mod logreg;
pub mod platt;
pub mod svm;

use alloc::vec::Vec;

use crate::error::CoreError;
use crate::linalg::Matrix;
use crate::math;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LearnerKind {
    Lr,
    SvmRbf,
    SvmLinear,
    Rf,
    Lda,
}

impl LearnerKind {
    pub fn name(&self) -> &'static str {
        match self {
            LearnerKind::Lr => "LR",
            LearnerKind::SvmRbf => "SVM_RBF",
            LearnerKind::SvmLinear => "SVM_LINEAR",
            LearnerKind::Rf => "RF",
            LearnerKind::Lda => "LDA",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gamma {
    /// 1/d, resolved against the feature count at fit time.
    Auto,
    Value(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LearnerSpec {
    pub kind: LearnerKind,
    pub c: f64,
    pub gamma: Gamma,
    pub n_trees: usize,
    pub seed: u64,
}

impl LearnerSpec {
    pub fn lr(c: f64) -> LearnerSpec {
        LearnerSpec {
            kind: LearnerKind::Lr,
            c,
            gamma: Gamma::Auto,
            n_trees: 0,
            seed: 0,
        }
    }

    pub fn svm_rbf(c: f64) -> LearnerSpec {
        LearnerSpec {
            kind: LearnerKind::SvmRbf,
            c,
            gamma: Gamma::Auto,
            n_trees: 0,
            seed: 0,
        }
    }

    pub fn svm_linear(c: f64) -> LearnerSpec {
        LearnerSpec {
            kind: LearnerKind::SvmLinear,
            c,
            gamma: Gamma::Auto,
            n_trees: 0,
            seed: 0,
        }
    }

    pub fn rf(n_trees: usize) -> LearnerSpec {
        LearnerSpec {
            kind: LearnerKind::Rf,
            c: 1.0,
            gamma: Gamma::Auto,
            n_trees,
            seed: 0,
        }
    }

    pub fn lda() -> LearnerSpec {
        LearnerSpec {
            kind: LearnerKind::Lda,
            c: 1.0,
            gamma: Gamma::Auto,
            n_trees: 0,
            seed: 0,
        }
    }

    /// Default task/query model: SVM with RBF kernel, C=1, gamma=1/d.
    pub fn default_model() -> LearnerSpec {
        LearnerSpec::svm_rbf(1.0)
    }

    pub fn with_seed(mut self, seed: u64) -> LearnerSpec {
        self.seed = seed;
        self
    }

    pub fn resolve_gamma(&self, d: usize) -> f64 {
        match self.gamma {
            Gamma::Auto => 1.0 / d.max(1) as f64,
            Gamma::Value(g) => g,
        }
    }

    /// Equality of the learning configuration, ignoring the fit seed.
    /// Used to decide whether a query model can reuse the task model.
    pub fn same_config(&self, other: &LearnerSpec) -> bool {
        self.kind == other.kind
            && self.c == other.c
            && self.gamma == other.gamma
            && self.n_trees == other.n_trees
    }
}

#[derive(Debug, Clone)]
pub enum Model {
    /// Single-class fallback: always predicts `label` with probability 1.
    Constant {
        label: f64,
    },
    LogReg(logreg::LogRegModel),
    Svm(svm::SvmModel),
    Forest(forest::ForestModel),
    Lda(lda::LdaModel),
}

impl Model {
    pub fn decision(&self, x: &[f64]) -> f64 {
        match self {
            Model::Constant { label } => *label,
            Model::LogReg(m) => m.decision(x),
            Model::Svm(m) => m.decision(x),
            Model::Forest(m) => m.decision(x),
            Model::Lda(m) => m.decision(x),
        }
    }

    pub fn predict(&self, x: &[f64]) -> f64 {
        match self {
            Model::Constant { label } => *label,
            _ => {
                if self.decision(x) >= 0.0 {
                    1.0
                } else {
                    -1.0
                }
            }
        }
    }

    pub fn proba_pos(&self, x: &[f64]) -> f64 {
        match self {
            Model::Constant { label } => {
                if *label > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Model::LogReg(m) => m.proba_pos(x),
            Model::Svm(m) => m.proba_pos(x),
            Model::Forest(m) => m.proba_pos(x),
            Model::Lda(m) => m.proba_pos(x),
        }
    }

    /// False when an iterative fit stopped at its iteration cap. Reported,
    /// never fatal.
    pub fn converged(&self) -> bool {
        match self {
            Model::Svm(m) => m.converged,
            Model::LogReg(m) => m.converged,
            _ => true,
        }
    }
}

/// Fits a model per the spec. Single-class labels yield `Constant`;
/// non-finite features are a numeric error.
pub fn train(spec: &LearnerSpec, x: &Matrix, y: &[f64]) -> Result<Model, CoreError> {
    assert_eq!(x.rows(), y.len(), "feature/label row mismatch");
    assert!(x.rows() > 0, "cannot train on zero rows");
    debug_assert!(
        y.iter().all(|&v| v == 1.0 || v == -1.0),
        "labels must be -1/+1"
    );
    if !x.is_finite() {
        return Err(CoreError::Numeric {
            context: "training features",
            value: f64::NAN,
        });
    }
    let has_pos = y.iter().any(|&v| v > 0.0);
    let has_neg = y.iter().any(|&v| v < 0.0);
    if !has_pos || !has_neg {
        return Ok(Model::Constant {
            label: if has_pos { 1.0 } else { -1.0 },
        });
    }
    match spec.kind {
        LearnerKind::Lr => Ok(Model::LogReg(logreg::fit(x, y, spec.c))),
        LearnerKind::SvmRbf => {
            let gamma = spec.resolve_gamma(x.cols());
            Ok(Model::Svm(svm::fit(
                x,
                y,
                spec.c,
                svm::KernelKind::Rbf(gamma),
            )))
        }
        LearnerKind::SvmLinear => Ok(Model::Svm(svm::fit(x, y, spec.c, svm::KernelKind::Linear))),
        LearnerKind::Rf => Ok(Model::Forest(forest::fit(x, y, spec.n_trees, spec.seed))),
        LearnerKind::Lda => Ok(Model::Lda(lda::fit(x, y))),
    }
}

/// Fraction of rows whose prediction matches the label.
pub fn accuracy(model: &Model, x: &Matrix, y: &[f64]) -> f64 {
    assert!(!y.is_empty(), "accuracy needs at least one row");
    let hits = (0..x.rows())
        .filter(|&r| model.predict(x.row(r)) == y[r])
        .count();
    hits as f64 / y.len() as f64
}

/// RBF kernel matrix K[i][j] = exp(-gamma * ||a_i - b_j||^2).
pub fn rbf_kernel(a: &Matrix, b: &Matrix, gamma: f64) -> Matrix {
    assert_eq!(a.cols(), b.cols(), "kernel operands need equal widths");
    let mut k = Matrix::zeros(a.rows(), b.rows());
    for i in 0..a.rows() {
        for j in 0..b.rows() {
            let d2 = math::squared_distance(a.row(i), b.row(j));
            k.set(i, j, math::exp(-gamma * d2));
        }
    }
    k
}

/// RBF kernel of a matrix with itself, exactly symmetric by construction
/// (the upper triangle is computed once and mirrored).
pub fn rbf_kernel_sym(a: &Matrix, gamma: f64) -> Matrix {
    let n = a.rows();
    let mut k = Matrix::zeros(n, n);
    for i in 0..n {
        k.set(i, i, 1.0);
        for j in (i + 1)..n {
            let v = math::exp(-gamma * math::squared_distance(a.row(i), a.row(j)));
            k.set(i, j, v);
            k.set(j, i, v);
        }
    }
    k
}

/// Recomputes class probabilities for a fitted model from the given data:
/// SVMs refit their sigmoid calibration, forests keep vote fractions, LR
/// and LDA keep native probabilities.
pub fn calibrate_proba(model: &mut Model, x: &Matrix, y: &[f64]) {
    if let Model::Svm(m) = model {
        let decisions: Vec<f64> = (0..x.rows()).map(|r| m.decision(x.row(r))).collect();
        m.platt = platt::fit(&decisions, y);
    }
}
