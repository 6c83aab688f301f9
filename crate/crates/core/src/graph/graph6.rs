//! graph6 text codec for graphs with at most 62 nodes.
//!
//! Layout: one size byte (n + 63), then the upper-triangle adjacency bits in
//! column order (0,1),(0,2),(1,2),(0,3),... packed big-endian into 6-bit
//! groups, zero-padded, each group offset by 63 into the printable range.

use super::Graph;
use crate::error::{Error, Result};

/// Single-size-byte encoding covers 1..=62 nodes.
pub const GRAPH6_MAX_N: usize = 62;

pub fn parse_graph6(line: &str) -> Result<Graph> {
    let bytes = line.as_bytes();
    if bytes.is_empty() {
        return Err(Error::Graph6 { offset: 0, msg: "empty line".into() });
    }
    let size = bytes[0];
    if !(63..=126).contains(&size) {
        return Err(Error::Graph6 { offset: 0, msg: format!("size byte {size} out of range 63..=126") });
    }
    let n = (size - 63) as usize;
    if n == 0 {
        return Err(Error::Unsupported("empty graph".into()));
    }
    if n > GRAPH6_MAX_N {
        return Err(Error::Unsupported(format!("graph6 size {n} > {GRAPH6_MAX_N}")));
    }
    let nbits = n * (n - 1) / 2;
    let ngroups = nbits.div_ceil(6);
    if bytes.len() != 1 + ngroups {
        return Err(Error::Graph6 {
            offset: bytes.len().min(1 + ngroups),
            msg: format!("expected {} payload bytes for n={n}, found {}", ngroups, bytes.len() - 1),
        });
    }
    let mut bits = Vec::with_capacity(ngroups * 6);
    for (i, &b) in bytes[1..].iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(Error::Graph6 { offset: 1 + i, msg: format!("payload byte {b} out of range 63..=126") });
        }
        let g = b - 63;
        for k in (0..6).rev() {
            bits.push((g >> k) & 1 == 1);
        }
    }
    if bits[nbits..].iter().any(|&b| b) {
        return Err(Error::Graph6 { offset: bytes.len() - 1, msg: "nonzero padding bits".into() });
    }
    let mut edges = Vec::new();
    let mut idx = 0;
    for v in 1..n {
        for u in 0..v {
            if bits[idx] {
                edges.push((u, v));
            }
            idx += 1;
        }
    }
    Graph::from_edges(n, &edges)
}

pub fn write_graph6(g: &Graph) -> Result<String> {
    let n = g.n();
    if n > GRAPH6_MAX_N {
        return Err(Error::Unsupported(format!("graph6 size {n} > {GRAPH6_MAX_N}")));
    }
    let nbits = n * (n - 1) / 2;
    let mut bits = Vec::with_capacity(nbits);
    for v in 1..n {
        for u in 0..v {
            bits.push(g.has_edge(u, v));
        }
    }
    let mut out = String::with_capacity(1 + nbits.div_ceil(6));
    out.push((n as u8 + 63) as char);
    for group in bits.chunks(6) {
        let mut val = 0u8;
        for (k, &b) in group.iter().enumerate() {
            if b {
                val |= 1 << (5 - k);
            }
        }
        out.push((val + 63) as char);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_traced_encodings() {
        // K2: single bit 1 -> group 100000 = 32 -> '_'.
        let k2 = Graph::from_edges(2, &[(0, 1)]).unwrap();
        assert_eq!(write_graph6(&k2).unwrap(), "A_");
        // Two isolated nodes: zero payload -> '?'.
        let e2 = Graph::from_edges(2, &[]).unwrap();
        assert_eq!(write_graph6(&e2).unwrap(), "A?");
        // K3: bits 111 -> 111000 = 56 -> 'w'.
        let k3 = Graph::from_edges(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        assert_eq!(write_graph6(&k3).unwrap(), "Bw");
        // P3 with edges 0-1, 1-2: bits 101 -> 101000 = 40 -> 'g'.
        let p3 = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(write_graph6(&p3).unwrap(), "Bg");
        // Star centered at 0 with edges 0-1, 0-2: bits 110 -> 'o'.
        let star = Graph::from_edges(3, &[(0, 1), (0, 2)]).unwrap();
        assert_eq!(write_graph6(&star).unwrap(), "Bo");
    }

    #[test]
    fn parse_inverts_write() {
        for s in ["A_", "A?", "Bw", "Bg", "Bo"] {
            let g = parse_graph6(s).unwrap();
            assert_eq!(write_graph6(&g).unwrap(), s);
        }
    }

    #[test]
    fn parse_rejects_malformed() {
        assert!(matches!(parse_graph6(""), Err(Error::Graph6 { offset: 0, .. })));
        // Size byte below 63.
        assert!(parse_graph6(">x").is_err());
        // Truncated payload for n=3.
        assert!(parse_graph6("B").is_err());
        // Trailing garbage.
        assert!(parse_graph6("A_Q").is_err());
        // Payload byte out of range 63..=126 (0x20).
        assert!(matches!(parse_graph6("A "), Err(Error::Graph6 { offset: 1, .. })));
        // Nonzero padding bits: n=2 has one data bit, five pad bits must be 0.
        assert!(parse_graph6("AO").is_err());
    }

    #[test]
    fn labeled_roundtrip_is_exact() {
        // Distinct labelings of isomorphic graphs stay distinct.
        let a = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let b = Graph::from_edges(4, &[(0, 2), (2, 1), (1, 3)]).unwrap();
        let (sa, sb) = (write_graph6(&a).unwrap(), write_graph6(&b).unwrap());
        assert_ne!(sa, sb);
        assert_eq!(parse_graph6(&sa).unwrap(), a);
        assert_eq!(parse_graph6(&sb).unwrap(), b);
    }
}
