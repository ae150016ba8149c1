//! Dataset parsing, train/test splitting, and pool initialization.
//!
//! Input format: one example per line, `<label> <idx>:<val> ...` with
//! 1-based strictly increasing indices. Labels must come from {-1,+1} or
//! {0,1}; 0 is normalized to -1 at parse time. Absent indices are zeros.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::CoreError;
use crate::linalg::Matrix;
use crate::math;
use crate::rng::{self, TrialRng};

#[derive(Debug, Clone)]
pub struct Dataset {
    pub name: String,
    pub x: Matrix,
    pub y: Vec<f64>,
}

impl Dataset {
    pub fn n(&self) -> usize {
        self.x.rows()
    }

    pub fn d(&self) -> usize {
        self.x.cols()
    }
}

/// Train/test index partition. Both sides are sorted ascending.
#[derive(Debug, Clone)]
pub struct DataSplit {
    pub train_idx: Vec<usize>,
    pub test_idx: Vec<usize>,
}

/// Labeled/unlabeled partition of the training indices, both sorted
/// ascending so that "lowest original index" tie-breaking is positional.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoolState {
    pub labeled: Vec<usize>,
    pub unlabeled: Vec<usize>,
}

impl PoolState {
    /// Moves a global index from the unlabeled to the labeled side.
    /// Panics if the index is not currently unlabeled.
    pub fn move_to_labeled(&mut self, global_idx: usize) {
        let pos = self
            .unlabeled
            .binary_search(&global_idx)
            .expect("queried index must be unlabeled");
        self.unlabeled.remove(pos);
        let ins = self.labeled.binary_search(&global_idx).unwrap_err();
        self.labeled.insert(ins, global_idx);
    }
}

/// Parses the sparse text format into a dense dataset.
///
/// `min_d` lets callers widen the feature space when trailing columns are
/// all-zero (the format cannot express them); the result has
/// d = max(largest index seen, min_d).
pub fn parse_sparse_dataset(name: &str, text: &str, min_d: usize) -> Result<Dataset, CoreError> {
    let mut rows: Vec<Vec<(usize, f64)>> = Vec::new();
    let mut labels_raw: Vec<f64> = Vec::new();
    let mut max_idx = 0usize;

    for (line_no, line) in text.lines().enumerate() {
        let line_no = line_no + 1;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let mut tokens = tokens_with_columns(line);
        let (label_col, label_tok) = tokens.next().expect("nonempty line has a token");
        let label: f64 = label_tok.parse().map_err(|_| CoreError::Parse {
            line: line_no,
            column: label_col,
            what: "label is not a number",
        })?;
        labels_raw.push(label);

        let mut feats: Vec<(usize, f64)> = Vec::new();
        let mut prev_idx = 0usize;
        for (col, tok) in tokens {
            let (idx_s, val_s) = tok.split_once(':').ok_or(CoreError::Parse {
                line: line_no,
                column: col,
                what: "expected idx:val",
            })?;
            let idx: usize = idx_s.parse().map_err(|_| CoreError::Parse {
                line: line_no,
                column: col,
                what: "feature index is not an integer",
            })?;
            if idx == 0 || idx <= prev_idx {
                return Err(CoreError::Parse {
                    line: line_no,
                    column: col,
                    what: "feature indices must be 1-based and strictly increasing",
                });
            }
            let val: f64 = val_s.parse().map_err(|_| CoreError::Parse {
                line: line_no,
                column: col,
                what: "feature value is not a number",
            })?;
            if !val.is_finite() {
                return Err(CoreError::Parse {
                    line: line_no,
                    column: col,
                    what: "feature value is not finite",
                });
            }
            prev_idx = idx;
            max_idx = max_idx.max(idx);
            feats.push((idx, val));
        }
        rows.push(feats);
    }

    if rows.is_empty() {
        return Err(CoreError::Parse {
            line: 1,
            column: 1,
            what: "empty dataset",
        });
    }

    // Normalize the label alphabet: {-1,+1} stays, {0,1} maps 0 to -1.
    let mut distinct: Vec<f64> = Vec::new();
    for &l in &labels_raw {
        if !distinct.contains(&l) {
            distinct.push(l);
        }
    }
    if distinct.len() > 2 || distinct.iter().any(|&l| l != 1.0 && l != -1.0 && l != 0.0) {
        return Err(CoreError::NotBinary);
    }
    let y: Vec<f64> = labels_raw
        .iter()
        .map(|&l| if l == 1.0 { 1.0 } else { -1.0 })
        .collect();

    let d = max_idx.max(min_d).max(1);
    let mut x = Matrix::zeros(rows.len(), d);
    for (r, feats) in rows.iter().enumerate() {
        for &(idx, val) in feats {
            x.set(r, idx - 1, val);
        }
    }
    Ok(Dataset {
        name: name.to_string(),
        x,
        y,
    })
}

fn tokens_with_columns(line: &str) -> impl Iterator<Item = (usize, &str)> {
    line.split_whitespace().map(move |tok| {
        // Offset of this token inside the line, 1-based.
        let col = tok.as_ptr() as usize - line.as_ptr() as usize + 1;
        (col, tok)
    })
}

/// Writes a dataset back to the sparse text format, omitting zeros.
/// Round-trips (n, d, labels, nonzero values) exactly; d survives only up
/// to the last nonzero column, as the format cannot state it.
pub fn serialize_dataset(ds: &Dataset) -> String {
    let mut out = String::new();
    for r in 0..ds.n() {
        out.push_str(if ds.y[r] > 0.0 { "+1" } else { "-1" });
        for (c, &v) in ds.x.row(r).iter().enumerate() {
            if v != 0.0 {
                out.push_str(&format!(" {}:{}", c + 1, v));
            }
        }
        out.push('\n');
    }
    out
}

/// Seeded uniform train/test partition with |test| = floor(fraction*n + 0.5).
pub fn split_train_test(n: usize, test_fraction: f64, rng: &mut TrialRng) -> DataSplit {
    assert!(
        test_fraction > 0.0 && test_fraction < 1.0,
        "test fraction must be in (0,1)"
    );
    let n_test = math::floor(test_fraction * n as f64 + 0.5) as usize;
    let order = rng::shuffled_indices(n, rng);
    let mut test_idx: Vec<usize> = order[..n_test].to_vec();
    let mut train_idx: Vec<usize> = order[n_test..].to_vec();
    test_idx.sort_unstable();
    train_idx.sort_unstable();
    DataSplit {
        train_idx,
        test_idx,
    }
}

/// Draws m initial labels uniformly without replacement from the training
/// indices. A single-class draw is a cold start: the caller must abandon
/// the trial, not redraw.
pub fn init_pool(
    train_idx: &[usize],
    y: &[f64],
    m: usize,
    rng: &mut TrialRng,
) -> Result<PoolState, CoreError> {
    assert!(
        m < train_idx.len(),
        "initial pool must leave unlabeled examples"
    );
    let picks = rng::sample_without_replacement(train_idx.len(), m, rng);
    let mut labeled = Vec::with_capacity(m);
    let mut unlabeled = Vec::with_capacity(train_idx.len() - m);
    let mut next_pick = 0usize;
    for (pos, &gi) in train_idx.iter().enumerate() {
        if next_pick < picks.len() && picks[next_pick] == pos {
            labeled.push(gi);
            next_pick += 1;
        } else {
            unlabeled.push(gi);
        }
    }
    let has_pos = labeled.iter().any(|&i| y[i] > 0.0);
    let has_neg = labeled.iter().any(|&i| y[i] < 0.0);
    if !has_pos || !has_neg {
        return Err(CoreError::ColdStart);
    }
    Ok(PoolState { labeled, unlabeled })
}

/// Majority-to-minority class count ratio (always >= 1).
pub fn imbalance_ratio(y: &[f64]) -> Result<f64, CoreError> {
    let pos = y.iter().filter(|&&v| v > 0.0).count();
    let neg = y.len() - pos;
    if pos == 0 || neg == 0 {
        return Err(CoreError::NotBinary);
    }
    Ok(pos.max(neg) as f64 / pos.min(neg) as f64)
}
