//! Boundary-state predictions: score admissible partitions, average the
//! boundary indicator over the argmax set.

use rand_chacha::ChaCha12Rng;

use crate::analysis::PredictionVector;
use crate::error::Result;
use crate::graph::Graph;
use crate::models::{admissible_partitions, Model, Partition};
use crate::search::derive_rng;

/// Default number of edge-noise samplings a stochastic scorer averages over.
pub const SOLWAY_NOISE_DRAWS: u32 = 10;

/// Evidence for a partition of a graph; higher is better. `noise_draws` and
/// `rng` support scorers that average over random edge-weight perturbations;
/// deterministic scorers ignore them.
pub trait PartitionScorer {
    fn score(&self, g: &Graph, p: &Partition, noise_draws: u32, rng: &mut ChaCha12Rng) -> f64;
}

/// Deterministic stand-in for the description-length evidence: prefer the
/// fewest cross-region edges, break ties toward balanced region sizes. The
/// two integer criteria are packed into one f64: block-size products are
/// below 1024 for n <= 10, so dividing by 1024 never crosses a cut level.
pub struct CutScorer;

impl PartitionScorer for CutScorer {
    fn score(&self, g: &Graph, p: &Partition, _noise_draws: u32, _rng: &mut ChaCha12Rng) -> f64 {
        -(p.cross_edges(g) as f64) + p.size_product() / 1024.0
    }
}

/// Scores every admissible partition and averages the boundary indicator
/// across the argmax set, giving each state a value in [0, 1]. Graphs with no
/// admissible partition get a flagged uniform vector.
pub fn solway_predictions(
    g: &Graph,
    graph_id: &str,
    scorer: &dyn PartitionScorer,
    noise_draws: u32,
    seed: u64,
) -> Result<PredictionVector> {
    let admissible = admissible_partitions(g)?;
    if admissible.is_empty() {
        return Ok(PredictionVector {
            graph_id: graph_id.to_string(),
            model: Model::Solway,
            values: vec![0.0; g.n()],
            se2: None,
            degenerate: true,
        });
    }
    let mut rng = derive_rng(seed, &[b"solway", graph_id.as_bytes()]);
    let scores: Vec<f64> = admissible
        .iter()
        .map(|p| scorer.score(g, p, noise_draws, &mut rng))
        .collect();
    let best = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut values = vec![0.0f64; g.n()];
    let mut hits = 0usize;
    for (p, &score) in admissible.iter().zip(&scores) {
        if score == best {
            hits += 1;
            for (s, on) in p.boundary(g).into_iter().enumerate() {
                if on {
                    values[s] += 1.0;
                }
            }
        }
    }
    for v in &mut values {
        *v /= hits as f64;
    }
    Ok(PredictionVector::exact(graph_id, Model::Solway, values))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn predict(g: &Graph) -> PredictionVector {
        solway_predictions(g, "t", &CutScorer, SOLWAY_NOISE_DRAWS, 0).unwrap()
    }

    #[test]
    fn bridge_endpoints_on_joined_triangles() {
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])
            .unwrap();
        let pred = predict(&g);
        assert_eq!(pred.values, vec![0.0, 0.0, 1.0, 1.0, 0.0, 0.0]);
        assert!(!pred.degenerate);
    }

    #[test]
    fn path_ties_average_to_half() {
        // P3 relaxes to all two-region splits; the two single-cut splits tie,
        // and their boundary indicators average to (1/2, 1, 1/2).
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let pred = predict(&g);
        assert_eq!(pred.values, vec![0.5, 1.0, 0.5]);
    }

    #[test]
    fn symmetric_graphs_get_symmetric_vectors() {
        let c4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(predict(&c4).values, vec![1.0; 4]);
        let k4 = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let v = predict(&k4).values;
        assert!(v.iter().all(|&x| x == v[0]));
    }

    #[test]
    fn barbell_prefers_the_narrow_cut() {
        // A 4-clique tied to a triangle by one edge: the unique min cut is
        // that bridge, so exactly its endpoints are boundary.
        let g = Graph::from_edges(
            7,
            &[
                (0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3),
                (4, 5), (5, 6), (4, 6),
                (3, 4),
            ],
        )
        .unwrap();
        let pred = predict(&g);
        assert_eq!(pred.values, vec![0.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0]);
    }
}
