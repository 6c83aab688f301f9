//! Set partitions of graph states: restricted-growth enumeration, boundary
//! structure, and the admissibility filter for boundary-state predictions.

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Enumeration bound; Bell(10) = 115,975 partitions is the largest batch the
/// exact-posterior models are asked to hold in memory.
pub const MAX_PARTITION_N: usize = 10;

/// A set partition of `{0..n-1}` in restricted-growth form: block labels
/// appear in first-use order, so equal partitions have equal assignments.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    assign: Vec<u8>,
    k: usize,
}

impl Partition {
    /// Renumbers arbitrary block labels into restricted-growth form.
    pub fn from_assignment(labels: &[usize]) -> Partition {
        let mut map: Vec<(usize, u8)> = Vec::new();
        let mut assign = Vec::with_capacity(labels.len());
        for &l in labels {
            let block = match map.iter().find(|(from, _)| *from == l) {
                Some(&(_, b)) => b,
                None => {
                    let b = map.len() as u8;
                    map.push((l, b));
                    b
                }
            };
            assign.push(block);
        }
        Partition { assign, k: map.len() }
    }

    pub fn n(&self) -> usize {
        self.assign.len()
    }

    /// Number of blocks K.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn block_of(&self, s: usize) -> usize {
        self.assign[s] as usize
    }

    /// Blocks in first-use order (equivalently, ordered by smallest member),
    /// members ascending.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.k];
        for (s, &b) in self.assign.iter().enumerate() {
            blocks[b as usize].push(s);
        }
        blocks
    }

    /// Per-state flag: true when the state has a neighbor in another block.
    pub fn boundary(&self, g: &Graph) -> Vec<bool> {
        let mut out = vec![false; self.n()];
        for s in 0..self.n() {
            out[s] = g
                .neighbors(s)
                .iter()
                .any(|&u| self.assign[u as usize] != self.assign[s]);
        }
        out
    }

    pub fn boundary_states(&self, g: &Graph) -> Vec<usize> {
        self.boundary(g)
            .iter()
            .enumerate()
            .filter_map(|(s, &b)| b.then_some(s))
            .collect()
    }

    /// Edges with endpoints in different blocks.
    pub fn cross_edges(&self, g: &Graph) -> usize {
        g.edges()
            .iter()
            .filter(|&&(u, v)| self.assign[u] != self.assign[v])
            .count()
    }

    /// Product of block sizes (the balance tie-breaker).
    pub fn size_product(&self) -> f64 {
        let mut sizes = vec![0u32; self.k];
        for &b in &self.assign {
            sizes[b as usize] += 1;
        }
        sizes.iter().map(|&s| s as f64).product()
    }
}

/// All set partitions of `{0..n-1}`, one per restricted growth string;
/// count is the Bell number B(n).
pub fn enumerate_partitions(n: usize) -> Result<Vec<Partition>> {
    if n == 0 || n > MAX_PARTITION_N {
        return Err(Error::Unsupported(format!(
            "partition enumeration supports 1..={MAX_PARTITION_N} states, got {n}"
        )));
    }
    let mut out = Vec::new();
    let mut assign = vec![0u8; n];
    fn rec(assign: &mut Vec<u8>, pos: usize, max_used: u8, out: &mut Vec<Partition>) {
        if pos == assign.len() {
            out.push(Partition {
                assign: assign.clone(),
                k: (max_used + 1) as usize,
            });
            return;
        }
        for b in 0..=(max_used + 1) {
            assign[pos] = b;
            rec(assign, pos + 1, max_used.max(b), out);
        }
    }
    // State 0 is always in block 0; recurse over the rest.
    rec(&mut assign, 1, 0, &mut out);
    Ok(out)
}

/// Partitions usable for boundary-state predictions: at least two regions,
/// each containing a non-boundary witness. When that filter removes
/// everything, the witness requirement is relaxed and only K >= 2 is kept.
pub fn admissible_partitions(g: &Graph) -> Result<Vec<Partition>> {
    let all = enumerate_partitions(g.n())?;
    let multi: Vec<Partition> = all.into_iter().filter(|p| p.k() >= 2).collect();
    let strict: Vec<Partition> = multi
        .iter()
        .filter(|p| {
            let boundary = p.boundary(g);
            let mut witness = vec![false; p.k()];
            for s in 0..p.n() {
                if !boundary[s] {
                    witness[p.block_of(s)] = true;
                }
            }
            witness.iter().all(|&w| w)
        })
        .cloned()
        .collect();
    Ok(if strict.is_empty() { multi } else { strict })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bell(n: usize) -> u64 {
        // Bell triangle: each row starts with the previous row's last entry,
        // and B(n) is the last entry of row n.
        let mut row = vec![1u64];
        for _ in 1..n {
            let mut next = vec![*row.last().unwrap()];
            for &x in &row {
                let last = *next.last().unwrap();
                next.push(last + x);
            }
            row = next;
        }
        *row.last().unwrap()
    }

    #[test]
    fn counts_are_bell_numbers() {
        assert_eq!(enumerate_partitions(3).unwrap().len(), 5);
        assert_eq!(enumerate_partitions(4).unwrap().len(), 15);
        for n in 1..=8 {
            assert_eq!(enumerate_partitions(n).unwrap().len() as u64, bell(n), "n={n}");
        }
        assert_eq!(bell(8), 4140);
        assert!(enumerate_partitions(11).is_err());
        assert!(enumerate_partitions(0).is_err());
    }

    #[test]
    fn enumeration_has_no_duplicates() {
        let parts = enumerate_partitions(6).unwrap();
        let set: std::collections::HashSet<_> = parts.iter().map(|p| p.assign.clone()).collect();
        assert_eq!(set.len(), parts.len());
    }

    #[test]
    fn blocks_and_boundary_on_a_path() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let p = Partition::from_assignment(&[7, 7, 2]);
        assert_eq!(p.k(), 2);
        assert_eq!(p.blocks(), vec![vec![0, 1], vec![2]]);
        assert_eq!(p.boundary_states(&g), vec![1, 2]);
        assert_eq!(p.cross_edges(&g), 1);
        assert_eq!(p.size_product(), 2.0);
        // Splitting off a path end leaves that region all-boundary.
        let q = Partition::from_assignment(&[0, 1, 1]);
        assert_eq!(q.boundary_states(&g), vec![0, 1]);
    }

    fn two_triangles() -> Graph {
        Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)]).unwrap()
    }

    #[test]
    fn admissibility_strict_and_relaxed() {
        // Two triangles joined by an edge: the triangle split survives the
        // strict filter (each triangle keeps two interior states).
        let g = two_triangles();
        let adm = admissible_partitions(&g).unwrap();
        let split = Partition::from_assignment(&[0, 0, 0, 1, 1, 1]);
        assert!(adm.contains(&split));
        assert!(adm.iter().all(|p| p.k() >= 2), "single-region never admissible");
        // P3's strict filter is empty (some region of every 2-way split is
        // all-boundary), so the relaxed rule admits every multi-region split.
        let p3 = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let adm = admissible_partitions(&p3).unwrap();
        assert_eq!(adm.len(), 4);
        assert!(!adm.iter().any(|p| p.k() == 1));
    }

    #[test]
    fn boundary_commutes_with_relabeling() {
        // Rotating C6 and the partition with it rotates the boundary set.
        let c6 = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]).unwrap();
        let p = Partition::from_assignment(&[0, 0, 0, 1, 1, 1]);
        let rot = |s: usize| (s + 1) % 6;
        let rotated = {
            let mut labels = vec![0usize; 6];
            for s in 0..6 {
                labels[rot(s)] = p.block_of(s);
            }
            Partition::from_assignment(&labels)
        };
        let base: Vec<usize> = p.boundary_states(&c6).iter().map(|&s| rot(s)).collect();
        let mut base = base;
        base.sort_unstable();
        assert_eq!(base, rotated.boundary_states(&c6));
    }
}
