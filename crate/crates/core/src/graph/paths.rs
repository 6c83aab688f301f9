//! Shortest-path enumeration and counting.

use super::Graph;
use crate::error::{Error, Result};

/// Every minimum-length path from `s` to `t`, each exactly once, in
/// lexicographic node order. The single-node path `[s]` is returned for s = t.
pub fn all_shortest_paths(g: &Graph, s: usize, t: usize) -> Result<Vec<Vec<usize>>> {
    let dist = g.distances_from(s);
    if dist[t].is_none() {
        return Err(Error::Unreachable { from: s, to: t });
    }
    // Walk the BFS DAG backwards from t; predecessors of v are neighbors u
    // with dist(u) = dist(v) - 1.
    let mut paths = Vec::new();
    let mut stack = vec![t];
    collect(g, &dist, s, &mut stack, &mut paths);
    for p in &mut paths {
        p.reverse();
    }
    paths.sort_unstable();
    Ok(paths)
}

fn collect(
    g: &Graph,
    dist: &[Option<u32>],
    s: usize,
    stack: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    let v = *stack.last().unwrap();
    if v == s {
        out.push(stack.clone());
        return;
    }
    let dv = dist[v].unwrap();
    for &u in g.neighbors(v) {
        let u = u as usize;
        if dist[u] == Some(dv - 1) {
            stack.push(u);
            collect(g, dist, s, stack, out);
            stack.pop();
        }
    }
}

/// Number of distinct shortest s->v paths for every v, by dynamic programming
/// over BFS layers. sigma[s] = 1; unreachable nodes get 0.
pub fn shortest_path_counts(g: &Graph, s: usize) -> Vec<u64> {
    let n = g.n();
    let mut dist = vec![u32::MAX; n];
    let mut sigma = vec![0u64; n];
    let mut order = Vec::with_capacity(n);
    dist[s] = 0;
    sigma[s] = 1;
    let mut queue = std::collections::VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        order.push(u);
        for &v in g.neighbors(u) {
            let v = v as usize;
            if dist[v] == u32::MAX {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
            if dist[v] == dist[u] + 1 {
                sigma[v] += sigma[u];
            }
        }
    }
    sigma
}
