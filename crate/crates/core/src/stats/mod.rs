//! Analysis layer: AUBC summaries, seed-wise rankings with the Friedman
//! test, usefulness improvements over the uniform baseline with paired
//! t-tests, applicability gaps grouped by dataset properties, and the
//! query/task compatibility grid.

pub mod special;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::math;

pub const SIGNIFICANCE: f64 = 0.05;
/// p-value stand-in when SD = 0 forces |t| to infinity; reported as an
/// upper bound together with the degeneracy flag.
pub const DEGENERATE_P: f64 = 1e-12;

/// One kept trial reduced to its area under the budget curve.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialAubc {
    pub dataset: String,
    pub strategy: String,
    pub seed: u64,
    pub aubc: f64,
}

/// Mean accuracy over every recorded round, t = 0 included. With unit
/// query steps the rectangle rule makes this exactly the normalized area
/// under the budget curve.
pub fn aubc(accs: &[f64]) -> f64 {
    assert!(!accs.is_empty(), "aubc needs at least one recorded round");
    math::mean(accs)
}

/// Trapezoid-rule variant, offered for sensitivity checks only.
pub fn aubc_trapezoid(accs: &[f64]) -> f64 {
    assert!(!accs.is_empty());
    if accs.len() == 1 {
        return accs[0];
    }
    let inner: f64 = accs[1..accs.len() - 1].iter().sum();
    (0.5 * (accs[0] + accs[accs.len() - 1]) + inner) / (accs.len() - 1) as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryCell {
    pub dataset: String,
    pub strategy: String,
    pub mean: f64,
    pub sd: f64,
    pub count: usize,
    pub tle: bool,
    pub underfilled: bool,
}

/// Engine-reported status for a (dataset, strategy) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellFlag {
    pub dataset: String,
    pub strategy: String,
    pub tle: bool,
    pub underfilled: bool,
}

/// Per-cell mean/SD AUBC over kept seeds, sorted by dataset then
/// strategy. Flagged cells are carried through (possibly with count 0)
/// so renderers can mark them; downstream tests must skip them.
pub fn summarize(trials: &[TrialAubc], flags: &[CellFlag]) -> Vec<SummaryCell> {
    let mut cells: BTreeMap<(String, String), Vec<f64>> = BTreeMap::new();
    for t in trials {
        cells
            .entry((t.dataset.clone(), t.strategy.clone()))
            .or_default()
            .push(t.aubc);
    }
    for f in flags {
        cells
            .entry((f.dataset.clone(), f.strategy.clone()))
            .or_default();
    }
    cells
        .into_iter()
        .map(|((dataset, strategy), vals)| {
            let flag = flags
                .iter()
                .find(|f| f.dataset == dataset && f.strategy == strategy);
            SummaryCell {
                mean: if vals.is_empty() {
                    0.0
                } else {
                    math::mean(&vals)
                },
                sd: math::sample_sd(&vals),
                count: vals.len(),
                tle: flag.map(|f| f.tle).unwrap_or(false),
                underfilled: flag.map(|f| f.underfilled).unwrap_or(false),
                dataset,
                strategy,
            }
        })
        .collect()
}

/// Rank 1 = largest value; ties share the average of their positions.
pub fn average_ranks_desc(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[b].partial_cmp(&values[a]).unwrap());
    let mut ranks = alloc::vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let avg = (i + j + 2) as f64 / 2.0;
        for &idx in &order[i..=j] {
            ranks[idx] = avg;
        }
        i = j + 1;
    }
    ranks
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankRow {
    pub dataset: String,
    pub strategy: String,
    pub mean_rank: f64,
    pub sd_rank: f64,
    pub n_seeds: usize,
}

/// Per-dataset seed-wise ranking over the seeds every strategy on that
/// dataset completed. Datasets with fewer than two strategies or fewer
/// than two common seeds are skipped.
pub fn rank_table(trials: &[TrialAubc]) -> Vec<RankRow> {
    let mut datasets: BTreeMap<String, BTreeMap<String, BTreeMap<u64, f64>>> = BTreeMap::new();
    for t in trials {
        datasets
            .entry(t.dataset.clone())
            .or_default()
            .entry(t.strategy.clone())
            .or_default()
            .insert(t.seed, t.aubc);
    }
    let mut rows = Vec::new();
    for (dataset, by_strategy) in &datasets {
        if by_strategy.len() < 2 {
            continue;
        }
        let mut common: Option<BTreeSet<u64>> = None;
        for seeds in by_strategy.values() {
            let set: BTreeSet<u64> = seeds.keys().copied().collect();
            common = Some(match common {
                None => set,
                Some(prev) => prev.intersection(&set).copied().collect(),
            });
        }
        let common = common.unwrap_or_default();
        if common.len() < 2 {
            continue;
        }
        let names: Vec<&String> = by_strategy.keys().collect();
        let mut per_strategy: Vec<Vec<f64>> = alloc::vec![Vec::new(); names.len()];
        for &seed in &common {
            let values: Vec<f64> = names.iter().map(|n| by_strategy[*n][&seed]).collect();
            let ranks = average_ranks_desc(&values);
            for (i, r) in ranks.into_iter().enumerate() {
                per_strategy[i].push(r);
            }
        }
        for (i, name) in names.iter().enumerate() {
            rows.push(RankRow {
                dataset: dataset.clone(),
                strategy: (*name).clone(),
                mean_rank: math::mean(&per_strategy[i]),
                sd_rank: math::sample_sd(&per_strategy[i]),
                n_seeds: common.len(),
            });
        }
    }
    rows
}

/// Friedman chi-square over k treatments × N blocks of raw values
/// (ranked within each block, average ranks on ties). Returns the
/// statistic and the chi-square upper-tail p with k−1 degrees of
/// freedom.
pub fn friedman_test(values: &[Vec<f64>]) -> (f64, f64) {
    let k = values.len();
    assert!(k >= 2, "friedman needs at least two treatments");
    let n = values[0].len();
    assert!(n >= 2, "friedman needs at least two blocks");
    assert!(values.iter().all(|v| v.len() == n), "ragged value matrix");

    let mut rank_sums = alloc::vec![0.0f64; k];
    for block in 0..n {
        let col: Vec<f64> = values.iter().map(|v| v[block]).collect();
        for (j, r) in average_ranks_desc(&col).into_iter().enumerate() {
            rank_sums[j] += r;
        }
    }
    let kf = k as f64;
    let nf = n as f64;
    let sum_rbar_sq: f64 = rank_sums
        .iter()
        .map(|&s| {
            let rbar = s / nf;
            rbar * rbar
        })
        .sum();
    let stat = (12.0 * nf / (kf * (kf + 1.0))) * sum_rbar_sq - 3.0 * nf * (kf + 1.0);
    let stat = stat.max(0.0);
    (stat, special::chi2_sf(stat, kf - 1.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairedT {
    pub t: f64,
    /// One-sided upper-tail p for the hypothesis mean > 0.
    pub p: f64,
    /// SD = 0 with a nonzero mean: |t| is infinite and p is reported as
    /// the DEGENERATE_P bound in the direction of the mean.
    pub degenerate: bool,
}

pub fn paired_t(diffs: &[f64]) -> PairedT {
    assert!(diffs.len() >= 2, "paired t needs at least two differences");
    let n = diffs.len() as f64;
    let mean = math::mean(diffs);
    let sd = math::sample_sd(diffs);
    if sd == 0.0 {
        return if mean == 0.0 {
            PairedT {
                t: 0.0,
                p: 1.0,
                degenerate: false,
            }
        } else if mean > 0.0 {
            PairedT {
                t: f64::INFINITY,
                p: DEGENERATE_P,
                degenerate: true,
            }
        } else {
            PairedT {
                t: f64::NEG_INFINITY,
                p: 1.0 - DEGENERATE_P,
                degenerate: true,
            }
        };
    }
    let t = mean / (sd / math::sqrt(n));
    PairedT {
        t,
        p: special::t_sf(t, n - 1.0),
        degenerate: false,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Improvement {
    pub dataset: String,
    pub strategy: String,
    pub mean_tau: f64,
    pub sd_tau: f64,
    pub p: f64,
    pub n_seeds: usize,
    pub degenerate: bool,
    pub significant_win: bool,
}

pub const BASELINE: &str = "uniform";

/// τ = per-seed AUBC difference against the uniform baseline, over the
/// seeds both sides completed; one-sided paired t per (dataset,
/// strategy). Pairs with fewer than two common seeds are skipped.
pub fn improvements(trials: &[TrialAubc]) -> Vec<Improvement> {
    let mut by_cell: BTreeMap<(String, String), BTreeMap<u64, f64>> = BTreeMap::new();
    for t in trials {
        by_cell
            .entry((t.dataset.clone(), t.strategy.clone()))
            .or_default()
            .insert(t.seed, t.aubc);
    }
    let mut rows = Vec::new();
    for ((dataset, strategy), seeds) in &by_cell {
        if strategy == BASELINE {
            continue;
        }
        let Some(base) = by_cell.get(&(dataset.clone(), String::from(BASELINE))) else {
            continue;
        };
        let diffs: Vec<f64> = seeds
            .iter()
            .filter_map(|(seed, &v)| base.get(seed).map(|b| v - b))
            .collect();
        if diffs.len() < 2 {
            continue;
        }
        let test = paired_t(&diffs);
        let mean_tau = math::mean(&diffs);
        rows.push(Improvement {
            dataset: dataset.clone(),
            strategy: strategy.clone(),
            mean_tau,
            sd_tau: math::sample_sd(&diffs),
            p: test.p,
            n_seeds: diffs.len(),
            degenerate: test.degenerate,
            significant_win: mean_tau > 0.0 && test.p < SIGNIFICANCE,
        });
    }
    rows
}

#[derive(Debug, Clone, PartialEq)]
pub struct UsefulnessCounts {
    /// (strategy, number of datasets with a significant win).
    pub per_strategy: Vec<(String, usize)>,
    /// (dataset, number of strategies significantly beating uniform).
    pub per_dataset: Vec<(String, usize)>,
}

pub fn usefulness_counts(improvements: &[Improvement]) -> UsefulnessCounts {
    let mut per_strategy: BTreeMap<String, usize> = BTreeMap::new();
    let mut per_dataset: BTreeMap<String, usize> = BTreeMap::new();
    for imp in improvements {
        per_strategy.entry(imp.strategy.clone()).or_insert(0);
        per_dataset.entry(imp.dataset.clone()).or_insert(0);
        if imp.significant_win {
            *per_strategy.get_mut(&imp.strategy).unwrap() += 1;
            *per_dataset.get_mut(&imp.dataset).unwrap() += 1;
        }
    }
    UsefulnessCounts {
        per_strategy: per_strategy.into_iter().collect(),
        per_dataset: per_dataset.into_iter().collect(),
    }
}

pub const ORACLE: &str = "bso";

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetAttrs {
    pub name: String,
    pub d: usize,
    pub n: usize,
    pub imbalance: f64,
}

impl DatasetAttrs {
    pub fn dim_tag(&self) -> &'static str {
        if self.d < 50 {
            "LD"
        } else {
            "HD"
        }
    }

    pub fn size_tag(&self) -> &'static str {
        if self.n < 1000 {
            "SS"
        } else {
            "LS"
        }
    }

    pub fn balance_tag(&self) -> &'static str {
        if self.imbalance < 1.5 {
            "BAL"
        } else {
            "IMB"
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeltaRow {
    pub dataset: String,
    pub strategy: String,
    pub delta: f64,
    /// False when the oracle did not run on this dataset and the max is
    /// taken over ordinary strategies only.
    pub best_includes_oracle: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeltaGroup {
    pub view: String,
    pub strategy: String,
    pub mean_delta: f64,
    pub sd_delta: f64,
    pub n_datasets: usize,
}

/// δ = (per-dataset best mean AUBC, oracle included where it ran) minus
/// the strategy's mean AUBC, then grouped by the three dataset-property
/// views. Flagged or empty cells are skipped.
pub fn delta_views(
    cells: &[SummaryCell],
    attrs: &[DatasetAttrs],
) -> (Vec<DeltaRow>, Vec<DeltaGroup>) {
    let usable: Vec<&SummaryCell> = cells
        .iter()
        .filter(|c| c.count > 0 && !c.tle && !c.underfilled)
        .collect();
    let mut best: BTreeMap<&str, (f64, bool)> = BTreeMap::new();
    for c in &usable {
        let entry = best
            .entry(c.dataset.as_str())
            .or_insert((f64::NEG_INFINITY, false));
        if c.mean > entry.0 {
            entry.0 = c.mean;
        }
        if c.strategy == ORACLE {
            entry.1 = true;
        }
    }
    let mut rows = Vec::new();
    for c in &usable {
        if c.strategy == ORACLE {
            continue;
        }
        let (max, has_oracle) = best[c.dataset.as_str()];
        rows.push(DeltaRow {
            dataset: c.dataset.clone(),
            strategy: c.strategy.clone(),
            delta: max - c.mean,
            best_includes_oracle: has_oracle,
        });
    }

    let mut groups: BTreeMap<(String, String), Vec<f64>> = BTreeMap::new();
    for row in &rows {
        let Some(attr) = attrs.iter().find(|a| a.name == row.dataset) else {
            continue;
        };
        for tag in [attr.dim_tag(), attr.size_tag(), attr.balance_tag()] {
            groups
                .entry((String::from(tag), row.strategy.clone()))
                .or_default()
                .push(row.delta);
        }
    }
    let grouped = groups
        .into_iter()
        .map(|((view, strategy), deltas)| DeltaGroup {
            view,
            strategy,
            mean_delta: math::mean(&deltas),
            sd_delta: math::sample_sd(&deltas),
            n_datasets: deltas.len(),
        })
        .collect();
    (rows, grouped)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompatGrid {
    /// Row (query model) and column (task model) order.
    pub models: Vec<String>,
    /// grid[query][task] = mean AUBC; None marks a hole.
    pub grid: Vec<Vec<Option<f64>>>,
    /// Columns whose diagonal entry equals the column maximum (ties
    /// count as dominance).
    pub dominance_columns: usize,
    /// (task model, max − diagonal) for columns with a diagonal deficit.
    pub deficits: Vec<(String, f64)>,
    pub holes: bool,
}

/// Assembles the query × task grid from (query model, task model, mean
/// AUBC) cells.
pub fn compat_matrix(cells: &[(String, String, f64)], models: &[String]) -> CompatGrid {
    let k = models.len();
    let mut grid = alloc::vec![alloc::vec![None; k]; k];
    for (q, t, v) in cells {
        let (Some(qi), Some(ti)) = (
            models.iter().position(|m| m == q),
            models.iter().position(|m| m == t),
        ) else {
            continue;
        };
        grid[qi][ti] = Some(*v);
    }
    let mut dominance = 0usize;
    let mut deficits = Vec::new();
    for col in 0..k {
        let col_max = (0..k)
            .filter_map(|row| grid[row][col])
            .fold(f64::NEG_INFINITY, f64::max);
        let Some(diag) = grid[col][col] else {
            continue;
        };
        if diag >= col_max {
            dominance += 1;
        } else {
            deficits.push((models[col].clone(), col_max - diag));
        }
    }
    let holes = grid.iter().any(|row| row.iter().any(|c| c.is_none()));
    CompatGrid {
        models: models.to_vec(),
        grid,
        dominance_columns: dominance,
        deficits,
        holes,
    }
}
