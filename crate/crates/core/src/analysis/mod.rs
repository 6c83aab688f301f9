//! Prediction vectors, standardization, correlations across models, and the
//! two-stage choice likelihood.

mod two_stage;

pub use two_stage::{
    fit_two_stage, simulate_trials, two_stage_log_likelihood, Trial, TwoStageFit,
};

use crate::error::{Error, Result};
use crate::models::Model;

/// Relative tolerance under which an exact prediction vector counts as uniform.
pub const UNIFORM_REL_TOL: f64 = 1e-9;
/// Multiplier on the largest per-state standard error when judging whether a
/// Monte Carlo prediction vector is uniform up to sampling noise.
pub const UNIFORM_SE_MULT: f64 = 4.0;

/// One model's per-state scores on one graph.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct PredictionVector {
    pub graph_id: String,
    pub model: Model,
    /// One value per state, indexed by state id.
    pub values: Vec<f64>,
    /// Squared standard error per state; `None` for exact models.
    pub se2: Option<Vec<f64>>,
    /// Set when the score is ill-defined for this graph (e.g. a repeated
    /// second eigenvalue makes the spectral cut arbitrary).
    pub degenerate: bool,
}

impl PredictionVector {
    pub fn exact(graph_id: &str, model: Model, values: Vec<f64>) -> Self {
        PredictionVector {
            graph_id: graph_id.to_string(),
            model,
            values,
            se2: None,
            degenerate: false,
        }
    }

    /// True when every state gets the same score, up to floating-point noise
    /// for exact models or up to sampling noise for Monte Carlo models.
    pub fn is_uniform(&self) -> bool {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for &v in &self.values {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if self.values.len() < 2 || !lo.is_finite() || !hi.is_finite() {
            return true;
        }
        match &self.se2 {
            None => {
                let scale = lo.abs().max(hi.abs()).max(1.0);
                hi - lo <= UNIFORM_REL_TOL * scale
            }
            Some(se2) => {
                let max_se = se2.iter().fold(0.0f64, |a, &s| a.max(s.max(0.0).sqrt()));
                hi - lo <= UNIFORM_SE_MULT * max_se.max(f64::EPSILON)
            }
        }
    }
}

/// Centers to mean 0 and scales to sample standard deviation 1 (n-1 in the
/// denominator). A constant vector standardizes to all zeros.
pub fn standardize(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    if n < 2 {
        return vec![0.0; n];
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
    if var <= 0.0 || !var.is_finite() {
        return vec![0.0; n];
    }
    let sd = var.sqrt();
    values.iter().map(|v| (v - mean) / sd).collect()
}

/// Pearson correlation; `None` when either side is constant (zero variance)
/// or the inputs are too short.
pub fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return None;
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (&a, &b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx <= 0.0 || syy <= 0.0 {
        return None;
    }
    Some((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Ranks with ties sharing their average rank, for Spearman correlation.
pub fn rank_with_ties(values: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).expect("NaN in ranked values"));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && values[idx[j + 1]] == values[idx[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            ranks[k] = avg;
        }
        i = j + 1;
    }
    ranks
}

/// Spearman rank correlation; `None` on constant input.
pub fn spearman(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return None;
    }
    pearson(&rank_with_ties(x), &rank_with_ties(y))
}

/// Correlation method for model-agreement matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorrKind {
    Pearson,
    Spearman,
}

/// Mean pairwise correlation between models across a graph corpus, with the
/// number of graphs contributing to each cell.
#[derive(Debug, Clone, serde::Serialize)]
pub struct CorrelationMatrix {
    pub models: Vec<Model>,
    /// Row-major mean correlations; NaN where no graph contributed.
    pub mean_r: Vec<f64>,
    /// Graphs contributing per cell (both vectors defined and non-uniform).
    pub counts: Vec<u64>,
}

impl CorrelationMatrix {
    pub fn get(&self, i: usize, j: usize) -> (f64, u64) {
        let k = i * self.models.len() + j;
        (self.mean_r[k], self.counts[k])
    }
}

/// Computes the mean correlation matrix over per-graph prediction vectors.
///
/// `per_graph` holds, for each graph, one prediction vector per model in
/// `models` order. A pair is skipped on a graph when either vector is uniform
/// (correlation undefined up to noise) or flagged degenerate.
pub fn correlation_matrix(
    models: &[Model],
    per_graph: &[Vec<PredictionVector>],
    kind: CorrKind,
) -> Result<CorrelationMatrix> {
    let k = models.len();
    for row in per_graph {
        if row.len() != k {
            return Err(Error::Domain(format!(
                "expected {k} prediction vectors per graph, got {}",
                row.len()
            )));
        }
    }
    let mut sums = vec![0.0f64; k * k];
    let mut counts = vec![0u64; k * k];
    for row in per_graph {
        let usable: Vec<bool> = row.iter().map(|p| !p.degenerate && !p.is_uniform()).collect();
        for i in 0..k {
            for j in 0..k {
                if i == j || !usable[i] || !usable[j] {
                    continue;
                }
                let r = match kind {
                    CorrKind::Pearson => pearson(&row[i].values, &row[j].values),
                    CorrKind::Spearman => spearman(&row[i].values, &row[j].values),
                };
                if let Some(r) = r {
                    sums[i * k + j] += r;
                    counts[i * k + j] += 1;
                }
            }
        }
    }
    let mean_r = sums
        .iter()
        .zip(&counts)
        .enumerate()
        .map(|(idx, (&s, &c))| {
            let (i, j) = (idx / k, idx % k);
            if i == j {
                1.0
            } else if c == 0 {
                f64::NAN
            } else {
                s / c as f64
            }
        })
        .collect();
    Ok(CorrelationMatrix { models: models.to_vec(), mean_r, counts })
}
