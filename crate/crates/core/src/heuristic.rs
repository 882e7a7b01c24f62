//! Two-stage baseline: a `delta`-grid scan of `q` collects three-point
//! patterns, and each pattern is refined by successive parabolic
//! interpolation. No optimality certificate.

use alloc::vec::Vec;

use crate::dual::{evaluate_q, q_at_mu_hi, DualConfig, DualEval};
use crate::error::{Result, SrqError};
use crate::instance::SphereContext;
use crate::report::{SolveReport, Status};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeuristicConfig {
    pub delta: f64,
    /// Refinement bracket tolerance; defaults to `delta / 100`.
    pub tol: Option<f64>,
    pub dual: DualConfig,
    pub max_fit_iter: usize,
}

impl HeuristicConfig {
    pub fn new(delta: f64) -> Self {
        Self { delta, tol: None, dual: DualConfig::default(), max_fit_iter: 100 }
    }
}

impl Default for HeuristicConfig {
    fn default() -> Self {
        Self::new(0.05)
    }
}

/// Grid values of `q` and the three-point patterns among them.
#[derive(Debug, Clone, PartialEq)]
pub struct GridScan {
    pub delta: f64,
    pub grid: Vec<f64>,
    pub q_values: Vec<f64>,
    /// Index triples `(i-1, i, i+1)` with `max(q[i-1], q[i+1]) <= q[i]`.
    pub patterns: Vec<[usize; 3]>,
}

/// Grid `mu_lo + i delta`, closed by `mu_hi`. When `(mu_hi - mu_lo) / delta`
/// is an integer the last regular point is `mu_hi` itself; otherwise `mu_hi`
/// is appended.
pub fn grid_points(mu_lo: f64, mu_hi: f64, delta: f64) -> Vec<f64> {
    let ratio = (mu_hi - mu_lo) / delta;
    let rounded = libm::round(ratio);
    let integral = (ratio - rounded).abs() <= 1e-9 * ratio.abs().max(1.0);
    let regular = if integral { rounded as usize + 1 } else { libm::floor(ratio) as usize + 1 };
    let mut grid: Vec<f64> = (0..regular).map(|i| mu_lo + i as f64 * delta).collect();
    if integral {
        *grid.last_mut().expect("grid has at least one point") = mu_hi;
    } else {
        grid.push(mu_hi);
    }
    grid
}

/// Evaluates `q` anywhere in `[mu_lo, mu_hi]`, routing `mu_hi` through the null space.
struct QEvaluator<'a> {
    ctx: &'a SphereContext,
    dual: DualConfig,
    evals: usize,
    phi_evals: usize,
    best: Option<(f64, f64, Option<DualEval>)>,
    lb_primal: f64,
}

impl<'a> QEvaluator<'a> {
    fn new(ctx: &'a SphereContext, dual: DualConfig) -> Self {
        Self { ctx, dual, evals: 0, phi_evals: 0, best: None, lb_primal: f64::NEG_INFINITY }
    }

    fn q(&mut self, mu: f64) -> Result<f64> {
        self.evals += 1;
        let (q, witness, eval) = if mu >= self.ctx.mu_hi() {
            let (q, x) = q_at_mu_hi(self.ctx)?;
            (q, x, None)
        } else {
            let e = evaluate_q(self.ctx, mu, &self.dual)?;
            self.phi_evals += e.phi_evals;
            (e.q, e.witness.clone(), Some(e))
        };
        if let Ok(f) = self.ctx.objective(&witness) {
            self.lb_primal = self.lb_primal.max(f);
        }
        if self.best.as_ref().is_none_or(|b| q > b.1) {
            self.best = Some((mu.min(self.ctx.mu_hi()), q, eval));
        }
        Ok(q)
    }
}

fn scan(eval: &mut QEvaluator<'_>, delta: f64) -> Result<GridScan> {
    if !(delta > 0.0) {
        return Err(SrqError::PreconditionViolation("delta must be positive"));
    }
    let grid = grid_points(eval.ctx.mu_lo(), eval.ctx.mu_hi(), delta);
    let q_values = grid.iter().map(|&mu| eval.q(mu)).collect::<Result<Vec<_>>>()?;
    let patterns = (1..grid.len().saturating_sub(1))
        .filter(|&i| q_values[i - 1].max(q_values[i + 1]) <= q_values[i])
        .map(|i| [i - 1, i, i + 1])
        .collect();
    Ok(GridScan { delta, grid, q_values, patterns })
}

/// First stage: evaluate `q` on the `delta` grid and collect patterns.
pub fn stage1_scan(ctx: &SphereContext, delta: f64, dual: &DualConfig) -> Result<GridScan> {
    scan(&mut QEvaluator::new(ctx, *dual), delta)
}

/// Successive parabolic interpolation for a local maximum inside a
/// three-point pattern `a < b < c`, `f(b) >= max(f(a), f(c))`. Every probe
/// lies strictly inside `(a, c)`. Returns the best point found.
pub fn quadratic_fit_search<F>(mut f: F, triple: [(f64, f64); 3], tol: f64, max_iter: usize) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let [(mut a, mut fa), (mut b, mut fb), (mut c, mut fc)] = triple;
    if !(a < b && b < c) || fb < fa.max(fc) || !(tol > 0.0) {
        return Err(SrqError::DegenerateTriple);
    }
    for _ in 0..max_iter {
        if c - a <= tol {
            break;
        }
        let (left, right) = (b - a, b - c);
        let num = left * left * (fb - fc) - right * right * (fb - fa);
        let den = left * (fb - fc) - right * (fb - fa);
        let scale = left.abs() * (fb - fc).abs() + right.abs() * (fb - fa).abs();
        if den.abs() <= 1e-14 * scale || den == 0.0 {
            break; // collinear
        }
        let guard = 1e-3 * tol;
        let x = (b - 0.5 * num / den).clamp(a + guard, c - guard);
        if (x - b).abs() < 0.5 * tol {
            break;
        }
        let fx = f(x)?;
        if x > b {
            if fx >= fb {
                (a, fa, b, fb) = (b, fb, x, fx);
            } else {
                (c, fc) = (x, fx);
            }
        } else if fx >= fb {
            (c, fc, b, fb) = (b, fb, x, fx);
        } else {
            (a, fa) = (x, fx);
        }
    }
    Ok((b, fb))
}

/// Both stages; the best of `mu_lo`, `mu_hi` and the refined local maxima.
pub fn two_stage_solve(ctx: &SphereContext, cfg: &HeuristicConfig) -> Result<SolveReport> {
    let tol = cfg.tol.unwrap_or(cfg.delta / 100.0);
    if !(tol > 0.0 && tol < cfg.delta) {
        return Err(SrqError::PreconditionViolation("tol must lie in (0, delta)"));
    }
    let mut eval = QEvaluator::new(ctx, cfg.dual);
    let scan = scan(&mut eval, cfg.delta)?;
    let stage1_evals = eval.evals;

    for p in &scan.patterns {
        let triple = p.map(|i| (scan.grid[i], scan.q_values[i]));
        quadratic_fit_search(|mu| eval.q(mu), triple, tol, cfg.max_fit_iter)?;
    }

    let (mu_star, q_star, incumbent) = eval.best.take().expect("grid is never empty");
    Ok(SolveReport {
        status: Status::Heuristic,
        mu_lo: ctx.mu_lo(),
        mu_hi: ctx.mu_hi(),
        mu_star,
        q_star,
        lb: q_star,
        ub: None,
        gap: None,
        lb_primal: eval.lb_primal,
        iterations: stage1_evals,
        dual_evals: eval.evals,
        phi_evals: eval.phi_evals,
        iteration_bound: None,
        open_nodes: 0,
        incumbent,
        stage1_evals: Some(stage1_evals),
        root: None,
        trace: Vec::new(),
    })
}
