//! Subgoal-valuation models: RRTD variants plus heuristic, spectral, and
//! partition-based baselines, all producing per-state prediction vectors.

mod centrality;
mod crp;
mod partition;
mod solway;

pub use centrality::{betweenness_predictions, degree_predictions};
pub use crp::{tomov_predictions, TomovParams};
pub use partition::{admissible_partitions, enumerate_partitions, Partition, MAX_PARTITION_N};
pub use solway::{solway_predictions, CutScorer, PartitionScorer, SOLWAY_NOISE_DRAWS};

use crate::analysis::PredictionVector;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rrtd::{rrtd_predictions, TaskDistribution};
use crate::search::Alg;

/// Model tag, as written in CSV/JSON output and accepted by the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Model {
    #[serde(rename = "RRTD-RW")]
    RrtdRw,
    #[serde(rename = "RRTD-BFS")]
    RrtdBfs,
    #[serde(rename = "RRTD-IDDFS")]
    RrtdIddfs,
    #[serde(rename = "RRTD-DFS")]
    RrtdDfs,
    Degree,
    Betweenness,
    QCut,
    Solway,
    Tomov,
}

impl Model {
    pub const ALL: [Model; 9] = [
        Model::RrtdRw,
        Model::RrtdBfs,
        Model::RrtdIddfs,
        Model::RrtdDfs,
        Model::Degree,
        Model::Betweenness,
        Model::QCut,
        Model::Solway,
        Model::Tomov,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Model::RrtdRw => "RRTD-RW",
            Model::RrtdBfs => "RRTD-BFS",
            Model::RrtdIddfs => "RRTD-IDDFS",
            Model::RrtdDfs => "RRTD-DFS",
            Model::Degree => "Degree",
            Model::Betweenness => "Betweenness",
            Model::QCut => "QCut",
            Model::Solway => "Solway",
            Model::Tomov => "Tomov",
        }
    }

    pub fn rrtd_alg(self) -> Option<Alg> {
        match self {
            Model::RrtdRw => Some(Alg::Rw),
            Model::RrtdBfs => Some(Alg::Bfs),
            Model::RrtdIddfs => Some(Alg::Iddfs),
            Model::RrtdDfs => Some(Alg::Dfs),
            _ => None,
        }
    }
}

impl std::str::FromStr for Model {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Model::ALL
            .iter()
            .copied()
            .find(|m| m.tag().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                let tags: Vec<&str> = Model::ALL.iter().map(|m| m.tag()).collect();
                Error::Domain(format!("unknown model tag {s:?}; valid tags: {}", tags.join(", ")))
            })
    }
}

impl std::fmt::Display for Model {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.tag())
    }
}

/// Shared knobs for producing one model's predictions on one graph.
#[derive(Debug, Clone)]
pub struct PredictConfig {
    pub dist: TaskDistribution,
    pub samples: u64,
    pub seed: u64,
    pub tomov: TomovParams,
    pub noise_draws: u32,
}

impl Default for PredictConfig {
    fn default() -> Self {
        PredictConfig {
            dist: TaskDistribution::DistinctPairs,
            samples: 1000,
            seed: 0,
            tomov: TomovParams::default(),
            noise_draws: SOLWAY_NOISE_DRAWS,
        }
    }
}

/// Computes one model's prediction vector for one graph.
pub fn predict(g: &Graph, graph_id: &str, model: Model, cfg: &PredictConfig) -> Result<PredictionVector> {
    if let Some(alg) = model.rrtd_alg() {
        return rrtd_predictions(g, graph_id, alg, cfg.dist, cfg.samples, cfg.seed);
    }
    match model {
        Model::Degree => degree_predictions(g, graph_id),
        Model::Betweenness => betweenness_predictions(g, graph_id),
        Model::QCut => crate::spectral::qcut_predictions(g, graph_id),
        Model::Solway => solway_predictions(g, graph_id, &CutScorer, cfg.noise_draws, cfg.seed),
        Model::Tomov => tomov_predictions(g, graph_id, &cfg.tomov, cfg.seed),
        _ => unreachable!("RRTD models handled above"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn model_tags_roundtrip() {
        for m in Model::ALL {
            assert_eq!(m.tag().parse::<Model>().unwrap(), m);
        }
        assert_eq!("rrtd-rw".parse::<Model>().unwrap(), Model::RrtdRw);
        let err = "Closeness".parse::<Model>().unwrap_err().to_string();
        assert!(err.contains("RRTD-RW") && err.contains("Tomov"), "error lists valid tags");
    }
}
