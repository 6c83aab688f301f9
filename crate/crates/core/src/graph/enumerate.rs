//! Isomorphism-free enumeration of small connected graphs.
//!
//! Generation is by canonical augmentation: every connected graph on n >= 3
//! nodes has a non-cut vertex (any spanning-tree leaf), so attaching a new
//! vertex to every nonempty neighbor subset of every canonical connected
//! (n-1)-node graph and deduplicating by canonical form reaches every
//! isomorphism class exactly once. This sidesteps filtering all 2^28 labeled
//! 8-node graphs through full canonicalization.

use super::{graph6::write_graph6, Graph};
use crate::error::{Error, Result};
use std::collections::HashSet;

pub const MAX_ENUM_N: usize = 8;

/// Upper-triangle bit index for the pair u < v, in graph6 column order.
#[inline]
fn pair_idx(u: usize, v: usize) -> usize {
    debug_assert!(u < v);
    v * (v - 1) / 2 + u
}

/// Adjacency rows (bitmasks over nodes) of an upper-triangle code.
fn rows(n: usize, bits: u32) -> [u8; 8] {
    let mut rows = [0u8; 8];
    for v in 1..n {
        for u in 0..v {
            if bits >> pair_idx(u, v) & 1 == 1 {
                rows[u] |= 1 << v;
                rows[v] |= 1 << u;
            }
        }
    }
    rows
}

fn code_is_connected(n: usize, bits: u32) -> bool {
    let rows = rows(n, bits);
    let mut seen: u8 = 1;
    loop {
        let mut next = seen;
        let mut m = seen;
        while m != 0 {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            next |= rows[v];
        }
        if next == seen {
            break;
        }
        seen = next;
    }
    seen.count_ones() as usize == n
}

/// Color refinement: iteratively split classes by the multiset of neighbor
/// colors, re-indexing classes by sorted signature so the final class order
/// is independent of the input labeling.
fn refine_colors(n: usize, rows: &[u8; 8]) -> [u8; 8] {
    let mut color = [0u8; 8];
    for v in 0..n {
        color[v] = rows[v].count_ones() as u8;
    }
    loop {
        // Signature: own color plus sorted neighbor colors.
        let mut sigs: Vec<[u8; 9]> = Vec::with_capacity(n);
        for v in 0..n {
            let mut sig = [u8::MAX; 9];
            sig[0] = color[v];
            let mut k = 1;
            let mut m = rows[v];
            while m != 0 {
                let u = m.trailing_zeros() as usize;
                m &= m - 1;
                sig[k] = color[u];
                k += 1;
            }
            sig[1..k].sort_unstable();
            sigs.push(sig);
        }
        let mut uniq: Vec<[u8; 9]> = sigs.clone();
        uniq.sort_unstable();
        uniq.dedup();
        let mut next = [0u8; 8];
        for v in 0..n {
            next[v] = uniq.binary_search(&sigs[v]).unwrap() as u8;
        }
        if next[..n] == color[..n] {
            return color;
        }
        color = next;
    }
}

fn encode_perm(n: usize, rows: &[u8; 8], perm: &[usize]) -> u32 {
    let mut bits = 0u32;
    for v in 1..n {
        for u in 0..v {
            if rows[perm[u]] >> perm[v] & 1 == 1 {
                bits |= 1 << pair_idx(u, v);
            }
        }
    }
    bits
}

/// Minimum encoding over all permutations that keep refinement classes in
/// class order. Classes are labeling-invariant, so this is a canonical form.
fn canonical_code(n: usize, bits: u32) -> u32 {
    let rows = rows(n, bits);
    let color = refine_colors(n, &rows);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_unstable_by_key(|&v| (color[v], v));
    let mut class_start = Vec::new();
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j < n && color[order[j]] == color[order[i]] {
            j += 1;
        }
        class_start.push((i, j));
        i = j;
    }
    let mut perm = order.clone();
    let mut best = u32::MAX;
    permute_classes(n, &rows, &mut perm, &class_start, 0, &mut best);
    best
}

fn permute_classes(
    n: usize,
    rows: &[u8; 8],
    perm: &mut Vec<usize>,
    classes: &[(usize, usize)],
    ci: usize,
    best: &mut u32,
) {
    if ci == classes.len() {
        *best = (*best).min(encode_perm(n, rows, perm));
        return;
    }
    let (lo, hi) = classes[ci];
    heap_permute(perm, lo, hi - lo, &mut |perm| {
        permute_classes(n, rows, perm, classes, ci + 1, best);
    });
}

/// Heap's algorithm over perm[lo..lo+len], restoring the slice afterwards.
fn heap_permute(perm: &mut Vec<usize>, lo: usize, len: usize, f: &mut dyn FnMut(&mut Vec<usize>)) {
    if len <= 1 {
        f(perm);
        return;
    }
    for i in 0..len {
        heap_permute(perm, lo, len - 1, f);
        if len % 2 == 0 {
            perm.swap(lo + i, lo + len - 1);
        } else {
            perm.swap(lo, lo + len - 1);
        }
    }
}

fn code_to_graph(n: usize, bits: u32) -> Graph {
    let mut edges = Vec::new();
    for v in 1..n {
        for u in 0..v {
            if bits >> pair_idx(u, v) & 1 == 1 {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).expect("codes are valid by construction")
}

/// One representative per isomorphism class of connected graphs on n nodes,
/// sorted by graph6 string. Supported for 2 <= n <= 8.
pub fn enumerate_connected(n: usize) -> Result<Vec<Graph>> {
    if !(2..=MAX_ENUM_N).contains(&n) {
        return Err(Error::Unsupported(format!("enumeration supports 2..={MAX_ENUM_N} nodes, got {n}")));
    }
    let mut level: Vec<u32> = vec![1]; // K2
    for k in 3..=n {
        let offset = (k - 1) * (k - 2) / 2;
        let mut seen = HashSet::new();
        for &parent in &level {
            for subset in 1u32..(1 << (k - 1)) {
                let child = parent | (subset << offset);
                debug_assert!(code_is_connected(k, child));
                seen.insert(canonical_code(k, child));
            }
        }
        level = seen.into_iter().collect();
        level.sort_unstable();
    }
    let mut graphs: Vec<(String, Graph)> = level
        .into_iter()
        .map(|code| {
            let g = code_to_graph(n, code);
            (write_graph6(&g).expect("n <= 8"), g)
        })
        .collect();
    graphs.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(graphs.into_iter().map(|(_, g)| g).collect())
}
