//! Dense symmetric eigensolver and the spectral helpers built on it.
//!
//! The matrix is reduced to tridiagonal form by Householder reflections and
//! the tridiagonal problem is solved by the implicit QL method. Extreme
//! eigenpairs skip the accumulation of the orthogonal factor: the eigenvalue
//! comes from QL without vectors and the eigenvector from inverse iteration
//! on the tridiagonal matrix, mapped back through the stored reflectors.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Result, SrqError};
use crate::matrix::{dot, norm, normalize, Cholesky, Matrix};

/// Which end of the spectrum to return.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extreme {
    Min,
    Max,
}

/// An eigenvalue with a unit eigenvector.
#[derive(Debug, Clone, PartialEq)]
pub struct EigPair {
    pub value: f64,
    pub vector: Vec<f64>,
}

/// Full eigendecomposition; `values` ascending, eigenvectors in the columns of `vectors`.
#[derive(Debug, Clone)]
pub struct SymEigen {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

impl SymEigen {
    pub fn pair(&self, k: usize) -> EigPair {
        EigPair { value: self.values[k], vector: self.vectors.column(k) }
    }
}

struct Reflector {
    v: Vec<f64>,
    beta: f64,
}

struct Tridiagonal {
    diag: Vec<f64>,
    /// `off[k] = T[k+1][k]`; the last entry is zero.
    off: Vec<f64>,
    /// `reflectors[k]` acts on coordinates `k+1..n`.
    reflectors: Vec<Reflector>,
}

fn tridiagonalize(m: &Matrix) -> Tridiagonal {
    let n = m.dim();
    let mut a = m.clone();
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n];
    let mut reflectors = Vec::with_capacity(n.saturating_sub(2));
    let mut w = vec![0.0; n];

    for k in 0..n.saturating_sub(2) {
        let len = n - k - 1;
        diag[k] = a[(k, k)];
        let mut v: Vec<f64> = (k + 1..n).map(|i| a[(i, k)]).collect();
        let tail = dot(&v[1..], &v[1..]);
        if tail == 0.0 {
            off[k] = v[0];
            reflectors.push(Reflector { v, beta: 0.0 });
            continue;
        }
        let xnorm = libm::sqrt(v[0] * v[0] + tail);
        let alpha = if v[0] > 0.0 { -xnorm } else { xnorm };
        v[0] -= alpha;
        let beta = 2.0 / dot(&v, &v);
        off[k] = alpha;

        // Two-sided update of the trailing block, S <- S - v w^T - w v^T,
        // touching only its lower triangle.
        w[..len].iter_mut().for_each(|x| *x = 0.0);
        for i in 0..len {
            let row = &a.row(k + 1 + i)[k + 1..k + 2 + i];
            let vi = v[i];
            w[i] += dot(&row[..i], &v[..i]) + row[i] * vi;
            for (wj, rj) in w[..i].iter_mut().zip(&row[..i]) {
                *wj += rj * vi;
            }
        }
        w[..len].iter_mut().for_each(|x| *x *= beta);
        let half = 0.5 * beta * dot(&w[..len], &v);
        for i in 0..len {
            w[i] -= half * v[i];
        }
        for i in 0..len {
            let (vi, wi) = (v[i], w[i]);
            let row = &mut a.row_mut(k + 1 + i)[k + 1..k + 2 + i];
            for ((rj, vj), wj) in row.iter_mut().zip(&v[..=i]).zip(&w[..=i]) {
                *rj -= vi * wj + wi * vj;
            }
        }
        reflectors.push(Reflector { v, beta });
    }
    if n >= 2 {
        diag[n - 2] = a[(n - 2, n - 2)];
        off[n - 2] = a[(n - 1, n - 2)];
    }
    if n >= 1 {
        diag[n - 1] = a[(n - 1, n - 1)];
    }
    Tridiagonal { diag, off, reflectors }
}

impl Tridiagonal {
    /// Maps a tridiagonal-basis vector back to the original basis (z <- Q z).
    fn apply_q(&self, z: &mut [f64]) {
        for (k, r) in self.reflectors.iter().enumerate().rev() {
            if r.beta == 0.0 {
                continue;
            }
            let seg = &mut z[k + 1..];
            let t = r.beta * dot(&r.v, seg);
            for (zi, vi) in seg.iter_mut().zip(&r.v) {
                *zi -= t * vi;
            }
        }
    }

    /// Explicit orthogonal factor Q with `M = Q T Q^T`.
    fn accumulate(&self) -> Matrix {
        let n = self.diag.len();
        let mut q = Matrix::identity(n);
        let mut t = vec![0.0; n];
        for (k, r) in self.reflectors.iter().enumerate().rev() {
            if r.beta == 0.0 {
                continue;
            }
            let cols = k + 1..n;
            t[cols.clone()].iter_mut().for_each(|x| *x = 0.0);
            for (i, vi) in r.v.iter().enumerate() {
                let row = q.row(k + 1 + i);
                for j in cols.clone() {
                    t[j] += vi * row[j];
                }
            }
            for (i, vi) in r.v.iter().enumerate() {
                let s = r.beta * vi;
                let row = q.row_mut(k + 1 + i);
                for j in cols.clone() {
                    row[j] -= s * t[j];
                }
            }
        }
        q
    }
}

/// Implicit QL on a symmetric tridiagonal matrix. On return `d` holds the
/// eigenvalues (unsorted); when `z` is given its columns are rotated along.
fn ql_implicit(d: &mut [f64], e: &mut [f64], mut z: Option<&mut Matrix>) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1 = 0.0f64;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > 80 {
                    return Err(SrqError::ConvergenceFailure);
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = libm::hypot(p, 1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = libm::hypot(p, e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if let Some(v) = z.as_deref_mut() {
                        for k in 0..n {
                            let vk1 = v[(k, i + 1)];
                            let vk = v[(k, i)];
                            v[(k, i + 1)] = s * vk + c * vk1;
                            v[(k, i)] = c * vk - s * vk1;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

fn check_input(m: &Matrix) -> Result<()> {
    if m.dim() == 0 {
        return Err(SrqError::DimensionMismatch("empty matrix"));
    }
    if m.as_slice().iter().any(|v| !v.is_finite()) {
        return Err(SrqError::ConvergenceFailure);
    }
    Ok(())
}

/// All eigenvalues and eigenvectors of a symmetric matrix.
pub fn sym_eig(m: &Matrix) -> Result<SymEigen> {
    check_input(m)?;
    let n = m.dim();
    let tri = tridiagonalize(m);
    let mut q = tri.accumulate();
    let mut d = tri.diag;
    let mut e = tri.off;
    ql_implicit(&mut d, &mut e, Some(&mut q))?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let values = order.iter().map(|&k| d[k]).collect();
    let mut vectors = Matrix::zeros(n);
    for (dst, &src) in order.iter().enumerate() {
        for i in 0..n {
            vectors[(i, dst)] = q[(i, src)];
        }
    }
    Ok(SymEigen { values, vectors })
}

/// All eigenvalues, ascending.
pub fn sym_eigvals(m: &Matrix) -> Result<Vec<f64>> {
    check_input(m)?;
    let tri = tridiagonalize(m);
    let mut d = tri.diag;
    let mut e = tri.off;
    ql_implicit(&mut d, &mut e, None)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Solves `(T - shift I) x = b` in place by Gaussian elimination with
/// partial pivoting; zero pivots are replaced by `tiny`.
fn tridiagonal_shifted_solve(diag: &[f64], off: &[f64], shift: f64, tiny: f64, b: &mut [f64]) {
    let n = diag.len();
    let mut d: Vec<f64> = diag.iter().map(|v| v - shift).collect();
    let mut dl: Vec<f64> = off[..n - 1].to_vec();
    let mut du: Vec<f64> = off[..n - 1].to_vec();
    let mut du2 = vec![0.0; n.saturating_sub(2)];
    let mut swapped = vec![false; n.saturating_sub(1)];

    for i in 0..n - 1 {
        if d[i].abs() >= dl[i].abs() {
            if d[i] == 0.0 {
                d[i] = tiny;
            }
            let fact = dl[i] / d[i];
            dl[i] = fact;
            d[i + 1] -= fact * du[i];
        } else {
            let fact = d[i] / dl[i];
            d[i] = dl[i];
            dl[i] = fact;
            let temp = du[i];
            du[i] = d[i + 1];
            d[i + 1] = temp - fact * d[i + 1];
            if i + 2 < n {
                du2[i] = du[i + 1];
                du[i + 1] *= -fact;
            }
            swapped[i] = true;
        }
    }
    if d[n - 1] == 0.0 {
        d[n - 1] = tiny;
    }

    for i in 0..n - 1 {
        if swapped[i] {
            let temp = b[i] - dl[i] * b[i + 1];
            b[i] = b[i + 1];
            b[i + 1] = temp;
        } else {
            b[i + 1] -= dl[i] * b[i];
        }
    }
    b[n - 1] /= d[n - 1];
    if n > 1 {
        b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
    }
    for i in (0..n.saturating_sub(2)).rev() {
        b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
    }
}

fn residual(m: &Matrix, pair: &EigPair) -> f64 {
    let mx = m.mul_vec(&pair.vector);
    let r: Vec<f64> = mx.iter().zip(&pair.vector).map(|(a, x)| a - pair.value * x).collect();
    norm(&r)
}

/// Relative residual tolerance accepted for the fast extreme-eigenpair path.
pub const EIG_TOL: f64 = 1e-10;

fn top_eigpair(m: &Matrix) -> Result<EigPair> {
    check_input(m)?;
    let n = m.dim();
    let tri = tridiagonalize(m);
    let mut d = tri.diag.clone();
    let mut e = tri.off.clone();
    ql_implicit(&mut d, &mut e, None)?;
    let value = d.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    let scale = tri.diag.iter().zip(&tri.off).map(|(a, b)| a.abs() + b.abs()).fold(0.0, f64::max);
    let tiny = if scale > 0.0 { f64::EPSILON * scale } else { f64::MIN_POSITIVE };
    let mut z: Vec<f64> = (0..n).map(|i| 1.0 + ((i * 7919) % 17) as f64 / 17.0).collect();
    normalize(&mut z)?;
    for _ in 0..3 {
        tridiagonal_shifted_solve(&tri.diag, &tri.off, value, tiny, &mut z);
        if normalize(&mut z).is_err() {
            break;
        }
    }
    tri.apply_q(&mut z);
    if normalize(&mut z).is_ok() {
        let pair = EigPair { value, vector: z };
        if residual(m, &pair) <= EIG_TOL * (1.0 + m.norm_inf()) {
            return Ok(pair);
        }
    }
    // Inverse iteration stalled; fall back to the full decomposition.
    let full = sym_eig(m)?;
    Ok(full.pair(n - 1))
}

/// Smallest or largest eigenvalue of a symmetric matrix with a unit eigenvector.
pub fn sym_eig_extreme(m: &Matrix, which: Extreme) -> Result<EigPair> {
    match which {
        Extreme::Max => top_eigpair(m),
        Extreme::Min => {
            let mut pair = top_eigpair(&m.scale(-1.0))?;
            pair.value = -pair.value;
            Ok(pair)
        }
    }
}

/// Smallest and largest generalized eigenvalues of the pencil `(B, W)`, `W > 0`.
pub fn pencil_extremes(b: &Matrix, w: &Matrix) -> Result<(f64, f64)> {
    if b.dim() != w.dim() {
        return Err(SrqError::DimensionMismatch("pencil matrices differ in size"));
    }
    let chol = Cholesky::factor(w, "W")?;
    let reduced = chol.congruence(b);
    let vals = sym_eigvals(&reduced)?;
    Ok((vals[0], vals[vals.len() - 1]))
}

/// Default tolerance used to decide which eigenvalues of a negative
/// semidefinite matrix count as zero.
pub fn default_null_tol(m: &Matrix) -> f64 {
    1e-8 * (1.0 + m.norm_inf())
}

/// Maximizes `x^T D x` over unit vectors in the (numerical) null space of `M`.
pub fn nullspace_max_quadratic(m: &Matrix, d: &Matrix, null_tol: f64) -> Result<EigPair> {
    if m.dim() != d.dim() {
        return Err(SrqError::DimensionMismatch("null-space matrices differ in size"));
    }
    let n = m.dim();
    let eig = sym_eig(m)?;
    let basis: Vec<usize> = (0..n).filter(|&k| eig.values[k].abs() <= null_tol).collect();
    if basis.is_empty() {
        return Err(SrqError::EmptyNullspace);
    }
    let k = basis.len();
    let cols: Vec<Vec<f64>> = basis.iter().map(|&c| eig.vectors.column(c)).collect();
    let d_cols: Vec<Vec<f64>> = cols.iter().map(|c| d.mul_vec(c)).collect();
    let mut projected = Matrix::zeros(k);
    for i in 0..k {
        for j in 0..k {
            projected[(i, j)] = dot(&cols[i], &d_cols[j]);
        }
    }
    projected.symmetrize();
    let inner = top_eigpair(&projected)?;
    let mut x = vec![0.0; n];
    for (coef, col) in inner.vector.iter().zip(&cols) {
        for (xi, ci) in x.iter_mut().zip(col) {
            *xi += coef * ci;
        }
    }
    normalize(&mut x)?;
    Ok(EigPair { value: inner.value, vector: x })
}
