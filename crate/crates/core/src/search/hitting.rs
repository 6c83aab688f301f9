//! Exact random-walk hitting times.
//!
//! H(s, z) solves H(z, z) = 0 and H(s, z) = 1 + sum_{v ~ s} H(v, z) / deg(s),
//! one dense linear system per target column.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::{solve, Matrix};

/// Expected steps H(s, z) for all ordered pairs of one connected graph.
#[derive(Debug, Clone)]
pub struct HittingTimeTable {
    n: usize,
    h: Vec<f64>,
}

impl HittingTimeTable {
    pub fn get(&self, s: usize, z: usize) -> f64 {
        self.h[s * self.n + z]
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// Single target column: H(s, z) for every s.
pub fn hitting_to(g: &Graph, z: usize) -> Result<Vec<f64>> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = g.n();
    // Unknowns are the n-1 states other than z.
    let index = |s: usize| if s < z { s } else { s - 1 };
    let mut a = Matrix::zeros(n - 1);
    for s in 0..n {
        if s == z {
            continue;
        }
        let i = index(s);
        a[(i, i)] += 1.0;
        let inv_deg = 1.0 / g.degree(s) as f64;
        for &v in g.neighbors(s) {
            let v = v as usize;
            if v != z {
                a[(i, index(v))] -= inv_deg;
            }
        }
    }
    let x = solve(a, vec![1.0; n - 1])?;
    let mut h = vec![0.0; n];
    for s in 0..n {
        if s != z {
            h[s] = x[index(s)];
        }
    }
    Ok(h)
}

pub fn hitting_times(g: &Graph) -> Result<HittingTimeTable> {
    let n = g.n();
    let mut h = vec![0.0; n * n];
    for z in 0..n {
        let col = hitting_to(g, z)?;
        for s in 0..n {
            h[s * n + z] = col[s];
        }
    }
    Ok(HittingTimeTable { n, h })
}
