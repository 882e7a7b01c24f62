//! Recovery of a maximizer of the sphere problem from `mu*`.
//!
//! Below the pencil top the maximizer is a top eigenvector of the
//! dual-optimal matrix `D + eta* (B - mu* W)`. When that eigenvalue is
//! (nearly) repeated the returned eigenvector need not satisfy
//! complementarity, so the span of the top two eigenvectors is searched for
//! a unit vector with `x'(B - mu* W)x = 0`.

use alloc::vec::Vec;

use crate::dual::{q_at_mu_hi, DualEval};
use crate::error::Result;
use crate::instance::SphereContext;
use crate::spectral::sym_eig;

/// Constraint violation tolerated before the two-vector search kicks in.
pub const FEAS_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct Recovered {
    /// Unit vector on the sphere.
    pub x: Vec<f64>,
    /// Sphere objective at `x`.
    pub f: f64,
    /// `|f - q| + max(0, -x'(B - mu W)x)`.
    pub residual: f64,
}

/// Unit combinations of `u` and `v` on which the quadratic form with entries
/// `(a11, a12, a22)` vanishes.
fn zero_form_combinations(u: &[f64], v: &[f64], a11: f64, a12: f64, a22: f64) -> Vec<Vec<f64>> {
    // x = u + t v gives a11 + 2 a12 t + a22 t^2 = 0; t = inf means x = v.
    let mut ts: Vec<Option<f64>> = Vec::new();
    let scale = a11.abs().max(a12.abs()).max(a22.abs());
    if a22.abs() <= 1e-15 * scale {
        ts.push(None);
        if a12 != 0.0 {
            ts.push(Some(-a11 / (2.0 * a12)));
        }
    } else {
        let disc = a12 * a12 - a11 * a22;
        if disc >= 0.0 {
            let root = libm::sqrt(disc);
            ts.push(Some((-a12 + root) / a22));
            ts.push(Some((-a12 - root) / a22));
        }
    }
    ts.into_iter()
        .map(|t| {
            let mut x = match t {
                Some(t) => u.iter().zip(v).map(|(a, b)| a + t * b).collect::<Vec<f64>>(),
                None => v.to_vec(),
            };
            let nrm = libm::sqrt(x.iter().map(|c| c * c).sum());
            x.iter_mut().for_each(|c| *c /= nrm);
            x
        })
        .filter(|x| x.iter().all(|c| c.is_finite()))
        .collect()
}

/// Maximizer for `mu* < mu_hi` from its dual evaluation.
pub fn recover_solution(ctx: &SphereContext, eval: &DualEval) -> Result<Recovered> {
    let pencil = ctx.pencil(eval.mu);
    let score = |x: &[f64]| -> Result<(f64, f64)> { Ok((ctx.objective(x)?, pencil.quad_form(x))) };

    let mut best_x = eval.witness.clone();
    let (mut best_f, mut best_c) = score(&best_x)?;

    let violated = best_c < -FEAS_TOL;
    let slack = best_c > FEAS_TOL && eval.eta > 0.0;
    if (violated || slack) && ctx.dim() >= 2 {
        let m = ctx.d().add_scaled(eval.eta, &pencil);
        let eig = sym_eig(&m)?;
        let n = ctx.dim();
        let (u, v) = (eig.vectors.column(n - 1), eig.vectors.column(n - 2));
        let mut cand = zero_form_combinations(
            &u,
            &v,
            pencil.quad_form(&u),
            {
                let pv = pencil.mul_vec(&v);
                u.iter().zip(&pv).map(|(a, b)| a * b).sum()
            },
            pencil.quad_form(&v),
        );
        cand.push(u);
        cand.push(v);
        for x in cand {
            let (f, c) = score(&x)?;
            if f > best_f {
                (best_x, best_f, best_c) = (x, f, c);
            }
        }
    }

    Ok(Recovered { residual: (best_f - eval.q).abs() + (-best_c).max(0.0), x: best_x, f: best_f })
}

/// Maximizer when `mu* = mu_hi`: the best `D`-direction in the pencil null space.
pub fn recover_at_mu_hi(ctx: &SphereContext) -> Result<Recovered> {
    let (q, x) = q_at_mu_hi(ctx)?;
    let f = ctx.objective(&x)?;
    Ok(Recovered { residual: (f - q).abs(), x, f })
}
