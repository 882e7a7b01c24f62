//! Problem instances: validation, whitening to the unit sphere, objective
//! evaluation and the random instance generator.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Result, SrqError};
use crate::matrix::{norm, normalize, Cholesky, Matrix};
use crate::spectral::{pencil_extremes, sym_eigvals};

/// Maximize `x'Bx / x'Wx + x'Dx / x'Vx` over `x != 0`, with `W, V` positive definite.
#[derive(Debug, Clone, PartialEq)]
pub struct SrqInstance {
    b: Matrix,
    w: Matrix,
    d: Matrix,
    v: Matrix,
}

fn sym_tol(m: &Matrix) -> f64 {
    1e-8 * m.max_abs()
}

fn psd_tol(m: &Matrix) -> f64 {
    1e-10 * (1.0 + m.norm_inf())
}

fn check_symmetric(m: &mut Matrix, name: &'static str) -> Result<()> {
    if m.as_slice().iter().any(|v| !v.is_finite()) {
        return Err(SrqError::NotSymmetric { name, asymmetry: f64::NAN });
    }
    let asymmetry = m.asymmetry();
    if asymmetry > sym_tol(m) {
        return Err(SrqError::NotSymmetric { name, asymmetry });
    }
    m.symmetrize();
    Ok(())
}

fn check_positive_definite(m: &Matrix, name: &'static str) -> Result<()> {
    let min_eig = sym_eigvals(m)?[0];
    if min_eig <= psd_tol(m) {
        return Err(SrqError::NotPositiveDefinite { name, min_eig });
    }
    Ok(())
}

impl SrqInstance {
    /// Checks dimensions, symmetry and definiteness. Matrices whose asymmetry
    /// is within tolerance are replaced by their symmetric part.
    pub fn validate(b: Matrix, w: Matrix, d: Matrix, v: Matrix) -> Result<Self> {
        let n = b.dim();
        if n == 0 {
            return Err(SrqError::DimensionMismatch("dimension must be positive"));
        }
        if w.dim() != n || d.dim() != n || v.dim() != n {
            return Err(SrqError::DimensionMismatch("B, W, D and V must share one size"));
        }
        let (mut b, mut w, mut d, mut v) = (b, w, d, v);
        check_symmetric(&mut b, "B")?;
        check_symmetric(&mut w, "W")?;
        check_symmetric(&mut d, "D")?;
        check_symmetric(&mut v, "V")?;
        check_positive_definite(&w, "W")?;
        check_positive_definite(&v, "V")?;
        Ok(Self { b, w, d, v })
    }

    /// Instance already in sphere form (`V = I`).
    pub fn with_identity_v(b: Matrix, w: Matrix, d: Matrix) -> Result<Self> {
        let n = b.dim();
        Self::validate(b, w, d, Matrix::identity(n))
    }

    pub fn dim(&self) -> usize {
        self.b.dim()
    }

    pub fn b(&self) -> &Matrix {
        &self.b
    }

    pub fn w(&self) -> &Matrix {
        &self.w
    }

    pub fn d(&self) -> &Matrix {
        &self.d
    }

    pub fn v(&self) -> &Matrix {
        &self.v
    }

    /// The objective `x'Bx / x'Wx + x'Dx / x'Vx`; invariant under scaling of `x`.
    pub fn objective(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim() {
            return Err(SrqError::DimensionMismatch("vector length differs from n"));
        }
        if norm(x) == 0.0 {
            return Err(SrqError::ZeroVector);
        }
        // Normalizing first keeps the quotients well scaled for tiny or huge x.
        let mut y = x.to_vec();
        normalize(&mut y)?;
        Ok(self.b.quad_form(&y) / self.w.quad_form(&y) + self.d.quad_form(&y) / self.v.quad_form(&y))
    }

    /// Congruence by the Cholesky factor of `V`, giving the sphere-constrained form.
    pub fn whiten(&self) -> Result<SphereContext> {
        let chol = Cholesky::factor(&self.v, "V")?;
        let b = chol.congruence(&self.b);
        let w = chol.congruence(&self.w);
        let d = chol.congruence(&self.d);
        SphereContext::build(b, w, d, Some(chol))
    }
}

/// The whitened problem `max x'Bx / x'Wx + x'Dx` over `|x| = 1`, together with
/// the spectral constants the solvers need.
#[derive(Debug, Clone)]
pub struct SphereContext {
    b: Matrix,
    w: Matrix,
    d: Matrix,
    lam_min_w: f64,
    lam_max_w: f64,
    mu_lo: f64,
    mu_hi: f64,
    v_factor: Option<Cholesky>,
}

impl SphereContext {
    /// Context for data already in sphere form (`V = I`); checks `W` like
    /// [`SrqInstance::validate`] does.
    pub fn from_sphere(b: Matrix, w: Matrix, d: Matrix) -> Result<Self> {
        let inst = SrqInstance::with_identity_v(b, w, d)?;
        SphereContext::build(inst.b, inst.w, inst.d, None)
    }

    fn build(b: Matrix, w: Matrix, d: Matrix, v_factor: Option<Cholesky>) -> Result<Self> {
        let w_eigs = sym_eigvals(&w)?;
        let lam_min_w = w_eigs[0];
        let lam_max_w = w_eigs[w_eigs.len() - 1];
        if lam_min_w <= 0.0 {
            return Err(SrqError::NotPositiveDefinite { name: "W", min_eig: lam_min_w });
        }
        let (mu_lo, mu_hi) = pencil_extremes(&b, &w)?;
        Ok(Self { b, w, d, lam_min_w, lam_max_w, mu_lo, mu_hi: mu_hi.max(mu_lo), v_factor })
    }

    pub fn dim(&self) -> usize {
        self.b.dim()
    }

    pub fn b(&self) -> &Matrix {
        &self.b
    }

    pub fn w(&self) -> &Matrix {
        &self.w
    }

    pub fn d(&self) -> &Matrix {
        &self.d
    }

    pub fn lam_min_w(&self) -> f64 {
        self.lam_min_w
    }

    pub fn lam_max_w(&self) -> f64 {
        self.lam_max_w
    }

    pub fn mu_lo(&self) -> f64 {
        self.mu_lo
    }

    pub fn mu_hi(&self) -> f64 {
        self.mu_hi
    }

    /// `B - mu W`.
    pub fn pencil(&self, mu: f64) -> Matrix {
        self.b.add_scaled(-mu, &self.w)
    }

    /// `f(x) = x'Bx / x'Wx + x'Dx` for a unit vector `x`.
    pub fn objective(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim() {
            return Err(SrqError::DimensionMismatch("vector length differs from n"));
        }
        let nrm = norm(x);
        if (nrm - 1.0).abs() > 1e-12 {
            return Err(SrqError::NotUnitNorm(nrm));
        }
        Ok(self.b.quad_form(x) / self.w.quad_form(x) + self.d.quad_form(x))
    }

    /// Maps a sphere point back to the original coordinates (`x = L^{-T} y`),
    /// returned with unit Euclidean norm.
    pub fn to_original(&self, y: &[f64]) -> Result<Vec<f64>> {
        let mut x = y.to_vec();
        if let Some(chol) = &self.v_factor {
            chol.solve_upper(&mut x);
        }
        normalize(&mut x)?;
        Ok(x)
    }
}

/// Parameters of the random instance family: `B, D` with entries uniform on
/// `[-range, range]`, `W, V = L L^T + delta I` with `L` lower bidiagonal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorSpec {
    pub n: usize,
    pub delta: f64,
    pub seed: u64,
    pub range: f64,
}

impl GeneratorSpec {
    pub fn new(n: usize, seed: u64) -> Self {
        Self { n, delta: 1.0, seed, range: 10.0 }
    }

    fn check(&self) -> Result<()> {
        if self.n < 2 {
            return Err(SrqError::InvalidSpec("n must be at least 2"));
        }
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(SrqError::InvalidSpec("delta must be positive"));
        }
        if !(self.range > 0.0 && self.range.is_finite()) {
            return Err(SrqError::InvalidSpec("range must be positive"));
        }
        Ok(())
    }
}

fn random_symmetric(rng: &mut ChaCha8Rng, n: usize, range: f64) -> Matrix {
    let mut m = Matrix::zeros(n);
    for i in 0..n {
        for j in i..n {
            let v = rng.gen_range(-range..=range);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    m
}

fn random_bidiagonal_gram(rng: &mut ChaCha8Rng, n: usize, range: f64, delta: f64) -> Matrix {
    let diag: Vec<f64> = (0..n).map(|_| rng.gen_range(-range..=range)).collect();
    let sub: Vec<f64> = (0..n - 1).map(|_| rng.gen_range(-range..=range)).collect();
    // (L L^T) is tridiagonal: row i of L is (.., sub[i-1], diag[i], ..).
    let mut m = Matrix::zeros(n);
    for i in 0..n {
        let prev = if i > 0 { sub[i - 1] } else { 0.0 };
        m[(i, i)] = diag[i] * diag[i] + prev * prev + delta;
        if i + 1 < n {
            let v = sub[i] * diag[i];
            m[(i + 1, i)] = v;
            m[(i, i + 1)] = v;
        }
    }
    m
}

/// Draws a random instance; identical specs give identical instances.
pub fn generate_random(spec: &GeneratorSpec) -> Result<SrqInstance> {
    spec.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let b = random_symmetric(&mut rng, spec.n, spec.range);
    let d = random_symmetric(&mut rng, spec.n, spec.range);
    let w = random_bidiagonal_gram(&mut rng, spec.n, spec.range, spec.delta);
    let v = random_bidiagonal_gram(&mut rng, spec.n, spec.range, spec.delta);
    SrqInstance::validate(b, w, d, v)
}
