//! Degree and betweenness centrality scores on the log scale.

use crate::analysis::PredictionVector;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::models::Model;

/// log(deg(s) / (n-1)): the log fraction of states adjacent to s.
pub fn degree_predictions(g: &Graph, graph_id: &str) -> Result<PredictionVector> {
    let n = g.n();
    if n < 2 {
        return Err(Error::Domain("degree centrality needs at least two states".into()));
    }
    let mut values = Vec::with_capacity(n);
    for s in 0..n {
        let d = g.degree(s);
        if d == 0 {
            return Err(Error::Domain(format!("state {s} is isolated")));
        }
        values.push((d as f64 / (n - 1) as f64).ln());
    }
    Ok(PredictionVector::exact(graph_id, Model::Degree, values))
}

/// Fraction of shortest paths containing each state, endpoints included,
/// averaged over unordered pairs: B(v) = mean over s < t of sigma_st(v) /
/// sigma_st. One BFS per state gives sigma to every other state, and a path
/// through v splits as sigma_sv * sigma_vt when d(s,v) + d(v,t) = d(s,t).
pub fn betweenness_scores(g: &Graph) -> Result<Vec<f64>> {
    let n = g.n();
    if n < 2 {
        return Err(Error::Domain("betweenness needs at least two states".into()));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let dist: Vec<Vec<u32>> = (0..n)
        .map(|s| {
            g.distances_from(s)
                .into_iter()
                .map(|d| d.expect("connected graph"))
                .collect()
        })
        .collect();
    let sigma: Vec<Vec<u64>> = (0..n).map(|s| crate::graph::shortest_path_counts(g, s)).collect();
    let pairs = (n * (n - 1) / 2) as f64;
    let mut scores = vec![0.0f64; n];
    for s in 0..n {
        for t in (s + 1)..n {
            for v in 0..n {
                let frac = if v == s || v == t {
                    1.0
                } else if dist[s][v] + dist[v][t] == dist[s][t] {
                    (sigma[s][v] * sigma[t][v]) as f64 / sigma[s][t] as f64
                } else {
                    0.0
                };
                scores[v] += frac;
            }
        }
    }
    for b in &mut scores {
        *b /= pairs;
    }
    Ok(scores)
}

/// log B(v); positive normalization cancels after standardization downstream.
pub fn betweenness_predictions(g: &Graph, graph_id: &str) -> Result<PredictionVector> {
    let values = betweenness_scores(g)?.into_iter().map(f64::ln).collect();
    Ok(PredictionVector::exact(graph_id, Model::Betweenness, values))
}
