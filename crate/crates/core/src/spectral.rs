//! Spectral structure of the normalized adjacency operator: eigenpairs,
//! sign-cut partitions, commute-time identities, low-rank random-walk value
//! approximations, and the spectral gap.

use crate::analysis::PredictionVector;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::{eig_sym, Matrix};
use crate::models::{Model, Partition};

/// Two adjacent eigenvalues closer than this make the sign cut arbitrary.
pub const DEGENERACY_TOL: f64 = 1e-8;

/// Eigenpairs of N = D^(-1/2) A D^(-1/2), eigenvalues descending. The top
/// eigenvalue of a connected graph is 1 with eigenvector proportional to
/// sqrt(d); the same eigenvectors diagonalize the normalized Laplacian I - N
/// with eigenvalues 1 - lambda.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    /// `eigenvectors[k]` pairs with `eigenvalues[k]`; orthonormal, sign fixed
    /// by the eigensolver convention.
    pub eigenvectors: Vec<Vec<f64>>,
    pub degrees: Vec<usize>,
    pub m: usize,
}

impl SpectralDecomposition {
    pub fn n(&self) -> usize {
        self.degrees.len()
    }

    pub fn lambda2(&self) -> f64 {
        self.eigenvalues[1]
    }

    /// Eigenvector at the second-largest eigenvalue (the QCut direction).
    pub fn v2(&self) -> &[f64] {
        &self.eigenvectors[1]
    }

    /// True when lambda_2 is (numerically) repeated, making v2 an arbitrary
    /// basis choice within its eigenspace.
    pub fn degenerate_lambda2(&self) -> bool {
        self.n() >= 3 && (self.eigenvalues[1] - self.eigenvalues[2]).abs() <= DEGENERACY_TOL
    }
}

/// Builds and decomposes N = D^(-1/2) A D^(-1/2).
pub fn spectral_decomposition(g: &Graph) -> Result<SpectralDecomposition> {
    let n = g.n();
    if g.m() == 0 {
        return Err(Error::Domain("spectral analysis needs at least one edge".into()));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let degrees: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut nmat = Matrix::zeros(n);
    for (u, v) in g.edges() {
        let w = 1.0 / ((degrees[u] * degrees[v]) as f64).sqrt();
        nmat[(u, v)] = w;
        nmat[(v, u)] = w;
    }
    let eig = eig_sym(&nmat)?;
    Ok(SpectralDecomposition {
        eigenvalues: eig.values,
        eigenvectors: eig.vectors,
        degrees,
        m: g.m(),
    })
}

/// 1 - lambda_2 of the normalized adjacency operator, in (0, 2].
pub fn spectral_gap(g: &Graph) -> Result<f64> {
    if g.n() < 2 {
        return Err(Error::Domain("spectral gap needs at least two states".into()));
    }
    Ok(1.0 - spectral_decomposition(g)?.lambda2())
}

/// Prediction -v2(s)^2: states near the sign boundary of the cut direction
/// score highest. Flagged degenerate when lambda_2 is repeated.
pub fn qcut_predictions(g: &Graph, graph_id: &str) -> Result<PredictionVector> {
    let sd = spectral_decomposition(g)?;
    let values = sd.v2().iter().map(|&x| -(x * x)).collect();
    Ok(PredictionVector {
        graph_id: graph_id.to_string(),
        model: Model::QCut,
        values,
        se2: None,
        degenerate: sd.degenerate_lambda2(),
    })
}

/// Entries of v2 within this of zero count as zero for the sign cut.
/// Matches the eigensolver's sign-convention threshold.
const SIGN_ZERO_TOL: f64 = 1e-9;

/// Sign cut of v2 at threshold zero; zero entries (within [`SIGN_ZERO_TOL`],
/// since exact zeros come out of the eigensolver as ~1e-17 noise of either
/// sign) join the nonnegative side. The eigensolver's sign convention makes
/// the assignment deterministic. The flag mirrors [`qcut_predictions`]: a
/// repeated lambda_2 makes the cut an arbitrary choice within the eigenspace.
pub fn qcut_partition(g: &Graph) -> Result<(Partition, bool)> {
    let sd = spectral_decomposition(g)?;
    let labels: Vec<usize> = sd.v2().iter().map(|&x| usize::from(x < -SIGN_ZERO_TOL)).collect();
    Ok((Partition::from_assignment(&labels), sd.degenerate_lambda2()))
}

/// Commute time H(s,z) + H(z,s) from the spectral identity
/// 2m * sum_{k>=2} (1/(1-lambda_k)) (v_k(z)/sqrt(d_z) - v_k(s)/sqrt(d_s))^2.
pub fn commute_from_decomposition(sd: &SpectralDecomposition, s: usize, z: usize) -> Result<f64> {
    let n = sd.n();
    if s >= n || z >= n {
        return Err(Error::Domain(format!("pair ({s}, {z}) out of range for {n} states")));
    }
    let ds = (sd.degrees[s] as f64).sqrt();
    let dz = (sd.degrees[z] as f64).sqrt();
    let mut total = 0.0f64;
    for k in 1..n {
        let gap = 1.0 - sd.eigenvalues[k];
        if gap <= 1e-12 {
            return Err(Error::Numeric(format!(
                "repeated unit eigenvalue (lambda_{} = {}); graph not connected?",
                k + 1,
                sd.eigenvalues[k]
            )));
        }
        let diff = sd.eigenvectors[k][z] / dz - sd.eigenvectors[k][s] / ds;
        total += diff * diff / gap;
    }
    Ok(2.0 * sd.m as f64 * total)
}

pub fn spectral_commute(g: &Graph, s: usize, z: usize) -> Result<f64> {
    commute_from_decomposition(&spectral_decomposition(g)?, s, z)
}

/// Rank-k' approximation of the all-pairs random-walk decomposition value:
/// V({z} | k') = -(2m/n) sum_{k=2}^{k'} (1/(1-lambda_k))
///               sum_s (v_k(z)/sqrt(d_z) - v_k(s)/sqrt(d_s))^2.
/// At k' = n this telescopes into the exact all-pairs RRTD-RW predictions
/// (mean commute time to z, negated).
pub fn rrtd_rw_rank(g: &Graph, graph_id: &str, k_max: usize) -> Result<PredictionVector> {
    let sd = spectral_decomposition(g)?;
    let n = sd.n();
    if !(2..=n).contains(&k_max) {
        return Err(Error::Domain(format!(
            "rank {k_max} out of range 2..={n}"
        )));
    }
    let inv_sqrt_d: Vec<f64> = sd.degrees.iter().map(|&d| 1.0 / (d as f64).sqrt()).collect();
    let mut values = vec![0.0f64; n];
    for z in 0..n {
        let mut total = 0.0f64;
        for k in 1..k_max {
            let gap = 1.0 - sd.eigenvalues[k];
            if gap <= 1e-12 {
                return Err(Error::Numeric(format!(
                    "repeated unit eigenvalue (lambda_{} = {})",
                    k + 1,
                    sd.eigenvalues[k]
                )));
            }
            let vk = &sd.eigenvectors[k];
            let mut inner = 0.0f64;
            for s in 0..n {
                let diff = vk[z] * inv_sqrt_d[z] - vk[s] * inv_sqrt_d[s];
                inner += diff * diff;
            }
            total += inner / gap;
        }
        values[z] = -(2.0 * sd.m as f64 / n as f64) * total;
    }
    Ok(PredictionVector {
        graph_id: graph_id.to_string(),
        model: Model::RrtdRw,
        values,
        se2: None,
        degenerate: false,
    })
}
