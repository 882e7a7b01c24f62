//! Evaluation of the parametric value function `q(mu) = mu + g(mu)`.
//!
//! `g(mu)` is the largest `x'Dx` over unit `x` with `x'(B - mu W)x >= 0`. For
//! `mu` below the top of the pencil spectrum it equals its Lagrangian dual
//!
//! ```text
//! min_{eta >= 0} phi(eta),   phi(eta) = lambda_max(D + eta (B - mu W)),
//! ```
//!
//! a one-dimensional convex problem. `x'(B - mu W)x` at a top eigenvector `x`
//! is a subgradient of `phi`, so the minimizer is bracketed by subgradient
//! signs and located by a safeguarded cutting-plane search. The two tangent
//! lines at the bracket ends give a certified lower bound on `g(mu)`; the
//! returned `nu` is always `phi` at an evaluated point and hence an upper
//! bound on `g(mu)`.

use alloc::vec::Vec;

use crate::error::{Result, SrqError};
use crate::instance::SphereContext;
use crate::matrix::Matrix;
use crate::spectral::{default_null_tol, nullspace_max_quadratic, sym_eig_extreme, EigPair, Extreme};

/// Tolerances of the dual minimization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualConfig {
    /// Target for `nu - g(mu)`, certified by the cutting-plane lower bound.
    pub tau_dual: f64,
    /// Bracket width floor relative to `1 + eta_hi`.
    pub tol_eta: f64,
    /// Bracketing gives up (with `BracketFailure`) beyond this multiplier.
    pub eta_cap: f64,
    /// Hard cap on `phi` evaluations per call.
    pub max_phi_evals: usize,
}

impl Default for DualConfig {
    fn default() -> Self {
        Self { tau_dual: 1e-9, tol_eta: 1e-10, eta_cap: 1e12, max_phi_evals: 200 }
    }
}

/// One evaluation of `q(mu)` through the dual.
#[derive(Debug, Clone, PartialEq)]
pub struct DualEval {
    pub mu: f64,
    /// Dual multiplier, `>= 0`.
    pub eta: f64,
    /// `lambda_max(D + eta (B - mu W))`, an upper bound on `g(mu)`.
    pub nu: f64,
    /// `mu + nu`.
    pub q: f64,
    /// Unit top eigenvector of `D + eta (B - mu W)`.
    pub witness: Vec<f64>,
    /// `witness' (B - mu W) witness`.
    pub constraint_value: f64,
    /// Certified lower bound on `g(mu)`; `nu - nu_lower` bounds the dual error.
    pub nu_lower: f64,
    pub phi_evals: usize,
}

impl DualEval {
    pub fn dual_gap(&self) -> f64 {
        (self.nu - self.nu_lower).max(0.0)
    }
}

/// `phi(eta) = lambda_max(D + eta (B - mu W))` with its top eigenpair.
pub fn phi(ctx: &SphereContext, mu: f64, eta: f64) -> Result<(f64, EigPair)> {
    if !(eta >= 0.0) {
        return Err(SrqError::PreconditionViolation("eta must be nonnegative"));
    }
    let pencil = ctx.pencil(mu);
    let pair = sym_eig_extreme(&ctx.d().add_scaled(eta, &pencil), Extreme::Max)?;
    Ok((pair.value, pair))
}

#[derive(Clone)]
struct Probe {
    eta: f64,
    value: f64,
    slope: f64,
    vector: Vec<f64>,
}

struct DualSearch<'a> {
    d: &'a Matrix,
    pencil: Matrix,
    evals: usize,
}

impl DualSearch<'_> {
    fn probe(&mut self, eta: f64) -> Result<Probe> {
        self.evals += 1;
        let m = if eta == 0.0 { self.d.clone() } else { self.d.add_scaled(eta, &self.pencil) };
        let pair = sym_eig_extreme(&m, Extreme::Max)?;
        let slope = self.pencil.quad_form(&pair.vector);
        Ok(Probe { eta, value: pair.value, slope, vector: pair.vector })
    }
}

fn finish(mu: f64, best: Probe, nu_lower: f64, evals: usize) -> DualEval {
    DualEval {
        mu,
        eta: best.eta,
        nu: best.value,
        q: mu + best.value,
        witness: best.vector,
        constraint_value: best.slope,
        nu_lower: nu_lower.min(best.value),
        phi_evals: evals,
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Side {
    None,
    Left,
    Right,
}

/// Evaluates `q(mu)` for `mu_lo <= mu < mu_hi`.
pub fn evaluate_q(ctx: &SphereContext, mu: f64, cfg: &DualConfig) -> Result<DualEval> {
    if !mu.is_finite() {
        return Err(SrqError::PreconditionViolation("mu must be finite"));
    }
    if mu >= ctx.mu_hi() {
        return Err(SrqError::PreconditionViolation("mu must lie below the top pencil eigenvalue"));
    }
    if mu < ctx.mu_lo() - 1e-12 * (1.0 + ctx.mu_lo().abs()) {
        return Err(SrqError::PreconditionViolation("mu must not lie below the bottom pencil eigenvalue"));
    }

    let mut search = DualSearch { d: ctx.d(), pencil: ctx.pencil(mu), evals: 0 };

    let origin = search.probe(0.0)?;
    if origin.slope >= 0.0 {
        // phi(eta) >= phi(0) + slope * eta >= phi(0): the multiplier is zero.
        let lower = origin.value;
        return Ok(finish(mu, origin, lower, search.evals));
    }

    let mut lo = origin;
    let mut eta = 1.0;
    let mut hi = loop {
        let p = search.probe(eta)?;
        if p.slope >= 0.0 {
            break p;
        }
        lo = p;
        eta *= 2.0;
        if eta > cfg.eta_cap {
            return Err(SrqError::BracketFailure { mu, eta_cap: cfg.eta_cap });
        }
    };

    let mut best = if lo.value <= hi.value { lo.clone() } else { hi.clone() };
    let mut last = Side::None;
    let mut repeat = 0;
    let lower = loop {
        if hi.slope == 0.0 {
            break hi.value;
        }
        // Tangents at the bracket ends meet at `cross`; their common value
        // is a lower bound on phi over the bracket, which holds the minimizer.
        let cross = (hi.value - lo.value + lo.slope * lo.eta - hi.slope * hi.eta) / (lo.slope - hi.slope);
        let cross = cross.clamp(lo.eta, hi.eta);
        let lower = lo.value + lo.slope * (cross - lo.eta);
        let width = hi.eta - lo.eta;
        if best.value - lower <= cfg.tau_dual
            || width <= cfg.tol_eta * (1.0 + hi.eta)
            || search.evals >= cfg.max_phi_evals
        {
            break lower;
        }
        // Bisect when one side keeps moving, as regula falsi would stall.
        let next = if repeat >= 2 { lo.eta + 0.5 * width } else { cross };
        let next = next.clamp(lo.eta + 1e-3 * width, hi.eta - 1e-3 * width);
        let p = search.probe(next)?;
        if p.value < best.value {
            best = p.clone();
        }
        let side = if p.slope < 0.0 { Side::Left } else { Side::Right };
        repeat = if side == last { repeat + 1 } else { 1 };
        last = side;
        match side {
            Side::Left => lo = p,
            _ => hi = p,
        }
    };

    Ok(finish(mu, best, lower, search.evals))
}

/// `q` at the top of the pencil spectrum, where the constraint reduces to the
/// null space of `B - mu_hi W`; also returns the maximizing unit vector.
pub fn q_at_mu_hi(ctx: &SphereContext) -> Result<(f64, Vec<f64>)> {
    let pencil = ctx.pencil(ctx.mu_hi());
    let pair = nullspace_max_quadratic(&pencil, ctx.d(), default_null_tol(&pencil))?;
    Ok((ctx.mu_hi() + pair.value, pair.vector))
}

/// Exact `g(mu)` for diagonal data `B = diag(b)`, `W = diag(w)`, `D = diag(d)`.
///
/// With `t_i = x_i^2` the problem is the linear program
/// `max d't` s.t. `sum t = 1`, `sum (b_i - mu w_i) t_i >= 0`, `t >= 0`, whose
/// vertices are feasible singletons and zero-crossing pairs.
pub fn diagonal_oracle(b: &[f64], w: &[f64], d: &[f64], mu: f64) -> Result<f64> {
    if b.len() != w.len() || b.len() != d.len() {
        return Err(SrqError::DimensionMismatch("diagonal vectors differ in length"));
    }
    let c: Vec<f64> = b.iter().zip(w).map(|(bi, wi)| bi - mu * wi).collect();
    let mut best = f64::NEG_INFINITY;
    for i in 0..c.len() {
        if c[i] >= 0.0 {
            best = best.max(d[i]);
            for j in 0..c.len() {
                if c[j] < 0.0 {
                    let span = c[i] - c[j];
                    let t_i = -c[j] / span;
                    let t_j = c[i] / span;
                    best = best.max(t_i * d[i] + t_j * d[j]);
                }
            }
        }
    }
    if best == f64::NEG_INFINITY {
        return Err(SrqError::Infeasible);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example2() -> SphereContext {
        SphereContext::from_sphere(
            Matrix::from_diag(&[1.0, 9.0, 2.0]),
            Matrix::from_diag(&[5.0, 2.0, 3.0]),
            Matrix::from_diag(&[5.0, 2.0, 3.0]),
        )
        .unwrap()
    }

    #[test]
    fn phi_at_zero_is_top_of_d() {
        let ctx = example2();
        let (v, _) = phi(&ctx, 1.0, 0.0).unwrap();
        assert!((v - 5.0).abs() < 1e-14);
    }

    #[test]
    fn phi_piecewise_linear_on_diagonal() {
        let ctx = example2();
        let eta = 3.0 / 21.2;
        let (v, _) = phi(&ctx, 4.4, eta).unwrap();
        let expected = (5.0 - 21.0 * eta).max(2.0 + 0.2 * eta).max(3.0 - 11.2 * eta);
        assert!((v - expected).abs() < 1e-13);
        assert!((v - 2.0283).abs() < 1e-4);
    }

    #[test]
    fn phi_rejects_negative_eta() {
        assert!(phi(&example2(), 1.0, -1.0).is_err());
    }

    #[test]
    fn inactive_constraint_at_mu_lo() {
        let ctx = example2();
        let e = evaluate_q(&ctx, 0.2, &DualConfig::default()).unwrap();
        assert!(e.eta.abs() < 1e-8);
        assert!((e.nu - 5.0).abs() < 1e-8);
        assert!((e.q - 5.2).abs() < 1e-8);
    }

    #[test]
    fn active_constraint_matches_lp() {
        let ctx = example2();
        let e = evaluate_q(&ctx, 4.4, &DualConfig::default()).unwrap();
        let exact = 43.0 / 21.2;
        assert!((e.nu - exact).abs() < 1e-8, "{} vs {}", e.nu, exact);
        assert!((e.eta - 3.0 / 21.2).abs() < 1e-6);
        assert!(e.nu_lower <= exact + 1e-12 && e.nu >= exact - 1e-12);
    }

    #[test]
    fn zero_d_gives_zero_multiplier() {
        let ctx = SphereContext::from_sphere(
            Matrix::from_rows([[1.0, 0.5], [0.5, 3.0]]),
            Matrix::identity(2),
            Matrix::zeros(2),
        )
        .unwrap();
        let e = evaluate_q(&ctx, 0.5 * (ctx.mu_lo() + ctx.mu_hi()), &DualConfig::default()).unwrap();
        assert_eq!(e.eta, 0.0);
        assert!(e.nu.abs() < 1e-14);
    }

    #[test]
    fn mu_at_or_above_top_is_rejected() {
        let ctx = example2();
        assert!(matches!(evaluate_q(&ctx, 4.5, &DualConfig::default()), Err(SrqError::PreconditionViolation(_))));
    }

    #[test]
    fn top_endpoint_uses_null_space() {
        let (q, x) = q_at_mu_hi(&example2()).unwrap();
        assert!((q - 6.5).abs() < 1e-12);
        assert!((x[1].abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn oracle_values() {
        let (b, w, d) = ([1.0, 9.0, 2.0], [5.0, 2.0, 3.0], [5.0, 2.0, 3.0]);
        assert!((diagonal_oracle(&b, &w, &d, 4.4).unwrap() - 43.0 / 21.2).abs() < 1e-14);
        assert_eq!(diagonal_oracle(&b, &w, &d, 0.2).unwrap(), 5.0);
        assert_eq!(diagonal_oracle(&b, &w, &[7.0; 3], 3.0).unwrap(), 7.0);
        assert_eq!(diagonal_oracle(&b, &w, &d, 10.0), Err(SrqError::Infeasible));
    }
}
