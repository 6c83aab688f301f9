//! Expected algorithm rewards R_Alg(s, z) = E[-|plan| - runtime], exact for
//! the random walk and Monte Carlo for the sampled algorithms, batched into
//! per-graph tables over all ordered state pairs.

use super::{cell_rng, hitting_times, run_bfs, run_dfs, run_iddfs, Alg};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Samples per derived generator; evaluation order across chunks never
/// changes results, so sequential and parallel runs agree exactly.
pub const SAMPLE_CHUNK: u64 = 256;

/// Per-algorithm expected reward over all ordered pairs of one graph.
/// `sem2` carries the squared standard error of each Monte Carlo mean
/// (zero for the exact random walk); diagonals are NaN sentinels.
#[derive(Debug, Clone)]
pub struct AlgCostTable {
    pub alg: Alg,
    pub samples: u64,
    pub seed: u64,
    n: usize,
    reward: Vec<f64>,
    sem2: Vec<f64>,
}

impl AlgCostTable {
    pub fn n(&self) -> usize {
        self.n
    }

    /// R_Alg(s, z) for s != z.
    pub fn reward(&self, s: usize, z: usize) -> f64 {
        debug_assert_ne!(s, z, "diagonal is undefined");
        self.reward[s * self.n + z]
    }

    /// Squared standard error of the stored mean.
    pub fn se2(&self, s: usize, z: usize) -> f64 {
        debug_assert_ne!(s, z);
        self.sem2[s * self.n + z]
    }

    pub(crate) fn from_parts(alg: Alg, samples: u64, seed: u64, n: usize, reward: Vec<f64>, sem2: Vec<f64>) -> Self {
        AlgCostTable { alg, samples, seed, n, reward, sem2 }
    }

    pub(crate) fn raw(&self) -> (&[f64], &[f64]) {
        (&self.reward, &self.sem2)
    }
}

/// Monte Carlo mean and squared standard error of the reward for one cell.
fn sample_cell(
    g: &Graph,
    graph_id: &str,
    alg: Alg,
    s: usize,
    z: usize,
    samples: u64,
    seed: u64,
) -> Result<(f64, f64)> {
    let mut sum = 0.0f64;
    let mut sumsq = 0.0f64;
    let mut done = 0u64;
    let mut chunk = 0u64;
    while done < samples {
        let take = SAMPLE_CHUNK.min(samples - done);
        let mut rng = cell_rng(seed, graph_id, alg, s, z, chunk);
        for _ in 0..take {
            let outcome = match alg {
                Alg::Bfs => run_bfs(g, s, z, &mut rng)?,
                Alg::Dfs => run_dfs(g, s, z, &mut rng)?,
                Alg::Iddfs => run_iddfs(g, s, z, &mut rng)?,
                Alg::Rw => unreachable!("random walk rewards are exact"),
            };
            let r = outcome.reward();
            sum += r;
            sumsq += r * r;
        }
        done += take;
        chunk += 1;
    }
    let mean = sum / samples as f64;
    let sem2 = if samples >= 2 {
        let var = (sumsq - samples as f64 * mean * mean).max(0.0) / (samples as f64 - 1.0);
        var / samples as f64
    } else {
        0.0
    };
    Ok((mean, sem2))
}

/// R_Alg(s, z): exact -H(s, z) for the random walk (the constant factor is
/// dropped; it cannot affect predictions), seeded Monte Carlo otherwise.
pub fn expected_alg_reward(
    g: &Graph,
    graph_id: &str,
    alg: Alg,
    s: usize,
    z: usize,
    samples: u64,
    seed: u64,
) -> Result<f64> {
    expected_alg_reward_se(g, graph_id, alg, s, z, samples, seed).map(|(mean, _)| mean)
}

/// Mean reward plus the squared standard error of that mean.
pub fn expected_alg_reward_se(
    g: &Graph,
    graph_id: &str,
    alg: Alg,
    s: usize,
    z: usize,
    samples: u64,
    seed: u64,
) -> Result<(f64, f64)> {
    if s == z {
        return Err(Error::Domain("reward is undefined for s = z".into()));
    }
    if s >= g.n() || z >= g.n() {
        return Err(Error::Domain(format!("pair ({s},{z}) out of range for n={}", g.n())));
    }
    if alg.is_exact() {
        let h = super::hitting_to(g, z)?;
        return Ok((-h[s], 0.0));
    }
    if samples == 0 {
        return Err(Error::Domain("sampled algorithms need samples >= 1".into()));
    }
    g.shortest_distance(s, z)?;
    sample_cell(g, graph_id, alg, s, z, samples, seed)
}

/// Rewards for all ordered pairs. Sample count is recorded as 0 for the
/// exact random-walk table.
pub fn alg_cost_table(g: &Graph, graph_id: &str, alg: Alg, samples: u64, seed: u64) -> Result<AlgCostTable> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = g.n();
    let mut reward = vec![f64::NAN; n * n];
    let mut sem2 = vec![f64::NAN; n * n];
    if alg.is_exact() {
        let h = hitting_times(g)?;
        for s in 0..n {
            for z in 0..n {
                if s != z {
                    reward[s * n + z] = -h.get(s, z);
                    sem2[s * n + z] = 0.0;
                }
            }
        }
        return Ok(AlgCostTable::from_parts(alg, 0, seed, n, reward, sem2));
    }
    if samples == 0 {
        return Err(Error::Domain("sampled algorithms need samples >= 1".into()));
    }
    for s in 0..n {
        for z in 0..n {
            if s != z {
                let (mean, se2) = sample_cell(g, graph_id, alg, s, z, samples, seed)?;
                reward[s * n + z] = mean;
                sem2[s * n + z] = se2;
            }
        }
    }
    Ok(AlgCostTable::from_parts(alg, samples, seed, n, reward, sem2))
}
