//! Dense linear algebra sized for graphs with at most a few hundred nodes:
//! Gaussian elimination with partial pivoting and a cyclic Jacobi
//! eigensolver for symmetric matrices.

use crate::error::{Error, Result};

/// Row-major dense square matrix.
#[derive(Debug, Clone)]
pub struct Matrix {
    pub n: usize,
    pub data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Matrix { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if (self[(i, j)] - self[(j, i)]).abs() > tol {
                    return false;
                }
            }
        }
        true
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

const PIVOT_TOL: f64 = 1e-10;

/// Solves A x = b by Gaussian elimination with partial pivoting.
/// Consumes its arguments as scratch space.
pub fn solve(mut a: Matrix, mut b: Vec<f64>) -> Result<Vec<f64>> {
    let n = a.n;
    if b.len() != n {
        return Err(Error::Domain(format!("rhs length {} != matrix size {n}", b.len())));
    }
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&r1, &r2| a[(r1, col)].abs().total_cmp(&a[(r2, col)].abs()))
            .unwrap();
        if a[(pivot_row, col)].abs() < PIVOT_TOL {
            return Err(Error::Numeric(format!("singular system (pivot {} at column {col})", a[(pivot_row, col)])));
        }
        if pivot_row != col {
            for j in 0..n {
                a.data.swap(pivot_row * n + j, col * n + j);
            }
            b.swap(pivot_row, col);
        }
        let pivot = a[(col, col)];
        for row in (col + 1)..n {
            let factor = a[(row, col)] / pivot;
            if factor == 0.0 {
                continue;
            }
            for j in col..n {
                let v = a[(col, j)];
                a[(row, j)] -= factor * v;
            }
            b[row] -= factor * b[col];
        }
    }
    for col in (0..n).rev() {
        let mut x = b[col];
        for j in (col + 1)..n {
            x -= a[(col, j)] * b[j];
        }
        b[col] = x / a[(col, col)];
    }
    Ok(b)
}

/// Symmetric eigendecomposition. Eigenvalues are sorted descending;
/// `vectors[k]` is the orthonormal eigenvector for `values[k]`, with the sign
/// fixed so its first entry of magnitude > 1e-9 is positive.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

const JACOBI_SWEEP_CAP: usize = 100;
const JACOBI_OFF_TOL: f64 = 1e-12;

/// Cyclic Jacobi rotations; adequate for the dense symmetric operators here.
pub fn eig_sym(m: &Matrix) -> Result<EigenDecomposition> {
    if !m.is_symmetric(1e-12) {
        return Err(Error::Domain("matrix is not symmetric".into()));
    }
    let n = m.n;
    let mut a = m.clone();
    let mut v = Matrix::identity(n);
    for _sweep in 0..JACOBI_SWEEP_CAP {
        let mut off = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                off += a[(i, j)] * a[(i, j)];
            }
        }
        if off.sqrt() <= JACOBI_OFF_TOL {
            return Ok(extract(&a, &v));
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq.abs() <= JACOBI_OFF_TOL / (n as f64) {
                    continue;
                }
                // Classic two-sided rotation zeroing a[(p, q)].
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    Err(Error::Numeric(format!("eigensolver did not converge in {JACOBI_SWEEP_CAP} sweeps")))
}

fn extract(a: &Matrix, v: &Matrix) -> EigenDecomposition {
    let n = a.n;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].total_cmp(&a[(i, i)]));
    let mut values = Vec::with_capacity(n);
    let mut vectors = Vec::with_capacity(n);
    for &k in &order {
        values.push(a[(k, k)]);
        let mut vec: Vec<f64> = (0..n).map(|i| v[(i, k)]).collect();
        if let Some(first) = vec.iter().find(|x| x.abs() > 1e-9) {
            if *first < 0.0 {
                for x in &mut vec {
                    *x = -*x;
                }
            }
        }
        vectors.push(vec);
    }
    EigenDecomposition { values, vectors }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(n: usize, rows: &[&[f64]]) -> Matrix {
        let mut m = Matrix::zeros(n);
        for (i, r) in rows.iter().enumerate() {
            for (j, &x) in r.iter().enumerate() {
                m[(i, j)] = x;
            }
        }
        m
    }

    #[test]
    fn solves_small_system() {
        // 2x + y = 5, x + 3y = 10 -> x = 1, y = 3.
        let a = mat(2, &[&[2.0, 1.0], &[1.0, 3.0]]);
        let x = solve(a, vec![5.0, 10.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-12 && (x[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_singular() {
        let a = mat(2, &[&[1.0, 2.0], &[2.0, 4.0]]);
        assert!(matches!(solve(a, vec![1.0, 2.0]), Err(Error::Numeric(_))));
    }

    #[test]
    fn pivoting_handles_zero_leading_entry() {
        let a = mat(2, &[&[0.0, 1.0], &[1.0, 0.0]]);
        let x = solve(a, vec![2.0, 3.0]).unwrap();
        assert!((x[0] - 3.0).abs() < 1e-12 && (x[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn eig_identity() {
        let eig = eig_sym(&Matrix::identity(4)).unwrap();
        assert!(eig.values.iter().all(|&l| (l - 1.0).abs() < 1e-10));
    }

    #[test]
    fn eig_k2_laplacian() {
        // [[1,-1],[-1,1]] has eigenvalues {2, 0}.
        let a = mat(2, &[&[1.0, -1.0], &[-1.0, 1.0]]);
        let eig = eig_sym(&a).unwrap();
        assert!((eig.values[0] - 2.0).abs() < 1e-10);
        assert!(eig.values[1].abs() < 1e-10);
        // Sign convention: first sizable entry positive.
        assert!(eig.vectors[0][0] > 0.0 && eig.vectors[1][0] > 0.0);
    }

    #[test]
    fn eig_reconstructs_and_is_orthonormal() {
        // Arbitrary symmetric matrix.
        let a = mat(
            4,
            &[
                &[2.0, -1.0, 0.5, 0.0],
                &[-1.0, 3.0, 0.0, 0.25],
                &[0.5, 0.0, -1.0, 1.0],
                &[0.0, 0.25, 1.0, 0.5],
            ],
        );
        let eig = eig_sym(&a).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let dot: f64 = (0..4).map(|k| eig.vectors[i][k] * eig.vectors[j][k]).sum();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((dot - expect).abs() < 1e-9, "orthonormality ({i},{j})");
                let recon: f64 = (0..4).map(|k| eig.values[k] * eig.vectors[k][i] * eig.vectors[k][j]).sum();
                assert!((recon - a[(i, j)]).abs() < 1e-8, "reconstruction ({i},{j})");
            }
        }
        // Descending order.
        assert!(eig.values.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn rejects_asymmetric() {
        let a = mat(2, &[&[1.0, 2.0], &[0.0, 1.0]]);
        assert!(eig_sym(&a).is_err());
    }
}
