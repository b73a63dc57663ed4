//! Dense complex matrices and a cyclic Jacobi Hermitian eigensolver.
//!
//! The matrices in this crate are small (spin blocks of dimension 3 or 4)
//! or moderate (oscillator densities of a few hundred rows), so a plain
//! row-major container is all that is needed.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::ops::{Index, IndexMut};

/// Row-major dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    /// All-zero matrix.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix { rows, cols, data: vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    /// Identity of size n.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Matrix from a row-major vector.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(data.len(), rows * cols, "CMatrix::from_vec size mismatch");
        CMatrix { rows, cols, data }
    }

    /// Matrix with entries f(i, j).
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        CMatrix { rows, cols, data }
    }

    /// Real diagonal matrix.
    pub fn from_diag(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, v) in d.iter().enumerate() {
            m[(i, i)] = Complex64::new(*v, 0.0);
        }
        m
    }

    /// Number of rows.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of columns.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Row-major storage.
    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    /// Column j as a vector.
    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    /// Matrix product.
    pub fn matmul(&self, o: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, o.rows, "matmul shape mismatch");
        let mut out = CMatrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..o.cols {
                    out.data[i * o.cols + j] += a * o.data[k * o.cols + j];
                }
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len(), "matvec shape mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.data[i * self.cols + j] * v[j]).sum())
            .collect()
    }

    /// Entrywise sum.
    pub fn add(&self, o: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "add shape mismatch");
        CMatrix::from_vec(self.rows, self.cols, self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect())
    }

    /// Entrywise difference.
    pub fn sub(&self, o: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "sub shape mismatch");
        CMatrix::from_vec(self.rows, self.cols, self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect())
    }

    /// Multiply every entry by a complex scalar.
    pub fn scale(&self, c: Complex64) -> CMatrix {
        CMatrix::from_vec(self.rows, self.cols, self.data.iter().map(|a| a * c).collect())
    }

    /// Trace.
    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Frobenius norm.
    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    /// max |A − A†| over entries.
    pub fn hermiticity_residual(&self) -> f64 {
        let mut r: f64 = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                r = r.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        r
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Columns are the matching orthonormal eigenvectors.
    pub vectors: CMatrix,
}

/// Hermitian eigen-decomposition by cyclic complex Jacobi rotations.
///
/// Sweeps continue until the off-diagonal Frobenius norm falls below
/// 1e-13·‖H‖. Inputs whose Hermiticity residual exceeds 1e-12·max(1, ‖H‖)
/// are rejected.
pub fn hermitian_eig(h: &CMatrix) -> Result<HermitianEigen> {
    assert_eq!(h.rows, h.cols, "hermitian_eig needs a square matrix");
    let n = h.rows;
    let norm = h.frobenius();
    let res = h.hermiticity_residual();
    if res > 1e-12 * norm.max(1.0) {
        return Err(Error::NotHermitian(res));
    }
    // Symmetrize so rounding in the input does not leak into the rotations.
    let mut a = CMatrix::from_fn(n, n, |i, j| 0.5 * (h[(i, j)] + h[(j, i)].conj()));
    let mut v = CMatrix::identity(n);
    let tol = 1e-13 * norm;
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag <= f64::MIN_POSITIVE {
                    continue;
                }
                // Remove the phase of a_pq, then a real symmetric rotation.
                let e = apq / mag;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = 0.5 * (aqq - app) / mag;
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // Rotation R acts on columns p, q: R_pp = c, R_pq = s·e,
                // R_qp = −s·e*, R_qq = c.
                let rpq = s * e;
                let rqp = -s * e.conj();
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * c + akq * rqp;
                    a[(k, q)] = akp * rpq + akq * c;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk + rqp.conj() * aqk;
                    a[(q, k)] = rpq.conj() * apk + c * aqk;
                }
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * c + vkq * rqp;
                    v[(k, q)] = vkp * rpq + vkq * c;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap_or(std::cmp::Ordering::Equal));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(HermitianEigen { values, vectors })
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub fn hermitian_eigenvalues(h: &CMatrix) -> Result<Vec<f64>> {
    Ok(hermitian_eig(h)?.values)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_and_diagonal() {
        let e = hermitian_eig(&CMatrix::identity(4)).unwrap();
        assert!(e.values.iter().all(|v| (v - 1.0).abs() < 1e-15));
        let e = hermitian_eig(&CMatrix::from_diag(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(e.values, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn reconstruction() {
        let h = CMatrix::from_vec(
            4,
            4,
            vec![
                c(1.0, 0.0), c(0.3, 0.2), c(-0.1, 0.5), c(0.0, -0.7),
                c(0.3, -0.2), c(-2.0, 0.0), c(0.4, 0.1), c(0.2, 0.2),
                c(-0.1, -0.5), c(0.4, -0.1), c(0.5, 0.0), c(1.1, -0.3),
                c(0.0, 0.7), c(0.2, -0.2), c(1.1, 0.3), c(0.9, 0.0),
            ],
        );
        let e = hermitian_eig(&h).unwrap();
        let lam = CMatrix::from_diag(&e.values);
        let rec = e.vectors.matmul(&lam).matmul(&e.vectors.adjoint());
        assert!(rec.sub(&h).max_abs() < 1e-12);
        let gram = e.vectors.adjoint().matmul(&e.vectors);
        assert!(gram.sub(&CMatrix::identity(4)).max_abs() < 1e-12);
        assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut h = CMatrix::identity(2);
        h[(0, 1)] = c(1.0, 0.0);
        assert!(matches!(hermitian_eig(&h), Err(Error::NotHermitian(_))));
    }
}
