//! Dense square matrices stored row-major.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use crate::error::{Result, SrqError};

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &v) in diag.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    /// Builds an `n x n` matrix from `n * n` row-major entries.
    pub fn from_row_major(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(SrqError::DimensionMismatch("row-major data length is not n*n"));
        }
        Ok(Self { n, data })
    }

    pub fn from_rows<const N: usize>(rows: [[f64; N]; N]) -> Self {
        let data = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Self { n: N, data }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        let n = self.n;
        &mut self.data[i * n..(i + 1) * n]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.n).map(|i| self[(i, j)]).collect()
    }

    pub fn diag(&self) -> Vec<f64> {
        (0..self.n).map(|i| self[(i, i)]).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    /// Largest |M_ij - M_ji|.
    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in 0..i {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Replaces the matrix by (M + M^T) / 2.
    pub fn symmetrize(&mut self) {
        for i in 0..self.n {
            for j in 0..i {
                let avg = 0.5 * (self[(i, j)] + self[(j, i)]);
                self[(i, j)] = avg;
                self[(j, i)] = avg;
            }
        }
    }

    /// Maximum absolute row sum; an upper bound on the spectral norm.
    pub fn norm_inf(&self) -> f64 {
        (0..self.n).map(|i| self.row(i).iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max)
    }

    /// `self + alpha * other`.
    pub fn add_scaled(&self, alpha: f64, other: &Matrix) -> Matrix {
        debug_assert_eq!(self.n, other.n);
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + alpha * b).collect();
        Matrix { n: self.n, data }
    }

    pub fn scale(&self, alpha: f64) -> Matrix {
        Matrix { n: self.n, data: self.data.iter().map(|v| alpha * v).collect() }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n).map(|i| dot(self.row(i), x)).collect()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        let n = self.n;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                let src = other.row(k);
                let dst = out.row_mut(i);
                for j in 0..n {
                    dst[j] += a * src[j];
                }
            }
        }
        out
    }

    /// x^T M x.
    pub fn quad_form(&self, x: &[f64]) -> f64 {
        (0..self.n).map(|i| x[i] * dot(self.row(i), x)).sum()
    }

    /// True when all off-diagonal entries are exactly zero.
    pub fn is_diagonal(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| i == j || self[(i, j)] == 0.0))
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len().min(b.len());
    let (a, b) = (&a[..n], &b[..n]);
    let mut acc = [0.0f64; 4];
    let mut ca = a.chunks_exact(4);
    let mut cb = b.chunks_exact(4);
    for (x, y) in (&mut ca).zip(&mut cb) {
        acc[0] += x[0] * y[0];
        acc[1] += x[1] * y[1];
        acc[2] += x[2] * y[2];
        acc[3] += x[3] * y[3];
    }
    let tail: f64 = ca.remainder().iter().zip(cb.remainder()).map(|(x, y)| x * y).sum();
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

pub fn norm(x: &[f64]) -> f64 {
    libm::sqrt(dot(x, x))
}

/// Scales `x` to unit Euclidean norm in place.
pub fn normalize(x: &mut [f64]) -> Result<()> {
    let nrm = norm(x);
    if nrm == 0.0 || !nrm.is_finite() {
        return Err(SrqError::ZeroVector);
    }
    x.iter_mut().for_each(|v| *v /= nrm);
    Ok(())
}

/// Lower-triangular Cholesky factor `L` with `M = L L^T`.
#[derive(Debug, Clone)]
pub struct Cholesky {
    l: Matrix,
}

impl Cholesky {
    /// Fails with `NotPositiveDefinite` when a pivot is not strictly positive.
    pub fn factor(m: &Matrix, name: &'static str) -> Result<Self> {
        let n = m.dim();
        let mut l = Matrix::zeros(n);
        for j in 0..n {
            let mut diag = m[(j, j)];
            for k in 0..j {
                diag -= l[(j, k)] * l[(j, k)];
            }
            if diag <= 0.0 || !diag.is_finite() {
                return Err(SrqError::NotPositiveDefinite { name, min_eig: diag });
            }
            let ljj = libm::sqrt(diag);
            l[(j, j)] = ljj;
            for i in j + 1..n {
                let mut s = m[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)];
                }
                l[(i, j)] = s / ljj;
            }
        }
        Ok(Self { l })
    }

    pub fn factor_matrix(&self) -> &Matrix {
        &self.l
    }

    /// Solves `L y = b` in place.
    pub fn solve_lower(&self, b: &mut [f64]) {
        let n = self.l.dim();
        for i in 0..n {
            let row = self.l.row(i);
            let s = b[i] - dot(&row[..i], &b[..i]);
            b[i] = s / row[i];
        }
    }

    /// Solves `L^T x = b` in place.
    pub fn solve_upper(&self, b: &mut [f64]) {
        let n = self.l.dim();
        for i in (0..n).rev() {
            let s = (i + 1..n).fold(b[i], |s, k| s - self.l[(k, i)] * b[k]);
            b[i] = s / self.l[(i, i)];
        }
    }

    /// Congruence `L^{-1} M L^{-T}` for symmetric `M`, symmetrized on return.
    pub fn congruence(&self, m: &Matrix) -> Matrix {
        let n = m.dim();
        // X = L^{-1} M, column by column.
        let mut x = Matrix::zeros(n);
        let mut col = vec![0.0; n];
        for j in 0..n {
            for i in 0..n {
                col[i] = m[(i, j)];
            }
            self.solve_lower(&mut col);
            for i in 0..n {
                x[(i, j)] = col[i];
            }
        }
        // C = L^{-1} X^T since M is symmetric.
        let mut c = Matrix::zeros(n);
        for j in 0..n {
            for i in 0..n {
                col[i] = x[(j, i)];
            }
            self.solve_lower(&mut col);
            for i in 0..n {
                c[(i, j)] = col[i];
            }
        }
        c.symmetrize();
        c
    }
}
