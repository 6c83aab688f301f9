//! Immutable simple undirected graphs with dense 0-based node ids.

mod enumerate;
mod graph6;
mod paths;

pub use enumerate::{enumerate_connected, MAX_ENUM_N};
pub use graph6::{parse_graph6, write_graph6, GRAPH6_MAX_N};
pub use paths::{all_shortest_paths, shortest_path_counts};

use crate::error::{Error, Result};

/// Simple undirected graph. Adjacency is symmetric with an all-false diagonal;
/// neighbor lists are sorted ascending so every traversal order is reproducible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    nbrs: Vec<Vec<u16>>,
}

/// A planning task: navigate from `start` to `goal`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct Task {
    pub start: usize,
    pub goal: usize,
}

impl Graph {
    /// Builds a graph from an edge list. Self-loops are rejected; duplicate
    /// edges (in either orientation) collapse to one.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 || n > u16::MAX as usize {
            return Err(Error::Unsupported(format!("node count {n}")));
        }
        let mut nbrs = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Domain(format!("edge ({u},{v}) out of range for n={n}")));
            }
            if u == v {
                return Err(Error::Domain(format!("self-loop at node {u}")));
            }
            if !nbrs[u].contains(&(v as u16)) {
                nbrs[u].push(v as u16);
                nbrs[v].push(u as u16);
            }
        }
        for list in &mut nbrs {
            list.sort_unstable();
        }
        Ok(Graph { n, nbrs })
    }

    /// 4-neighborhood lattice with `width * height` nodes indexed row-major.
    pub fn grid(width: usize, height: usize) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Domain("grid dimensions must be positive".into()));
        }
        let n = width
            .checked_mul(height)
            .filter(|&n| n <= u16::MAX as usize)
            .ok_or_else(|| Error::Unsupported(format!("grid {width}x{height} too large")))?;
        let mut edges = Vec::with_capacity(2 * n);
        for r in 0..height {
            for c in 0..width {
                let v = r * width + c;
                if c + 1 < width {
                    edges.push((v, v + 1));
                }
                if r + 1 < height {
                    edges.push((v, v + width));
                }
            }
        }
        Graph::from_edges(n, &edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Edge count m.
    pub fn m(&self) -> usize {
        self.nbrs.iter().map(|l| l.len()).sum::<usize>() / 2
    }

    pub fn degree(&self, v: usize) -> usize {
        self.nbrs[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &[u16] {
        &self.nbrs[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.nbrs[u].binary_search(&(v as u16)).is_ok()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.m());
        for u in 0..self.n {
            for &v in &self.nbrs[u] {
                if u < v as usize {
                    out.push((u, v as usize));
                }
            }
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &v in &self.nbrs[u] {
                let v = v as usize;
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == self.n
    }

    /// BFS distances from `s` in edges; `None` marks unreachable nodes.
    pub fn distances_from(&self, s: usize) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.n];
        dist[s] = Some(0);
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &v in &self.nbrs[u] {
                let v = v as usize;
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Minimum-edge path length; errors when `t` is unreachable from `s`.
    pub fn shortest_distance(&self, s: usize, t: usize) -> Result<u32> {
        self.distances_from(s)[t].ok_or(Error::Unreachable { from: s, to: t })
    }
}
