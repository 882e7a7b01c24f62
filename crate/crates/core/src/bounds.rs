//! Saw-tooth overestimators of `q` on an interval.
//!
//! For `mu >= mu_i` the dual pair at `mu_i` gives
//! `q(mu) <= q(mu_i) + (mu - mu_i)(1 - eta_i lambda_min(W))`, and for
//! `mu <= mu_{i+1}` the pair at the right end gives
//! `q(mu) <= q(mu_{i+1}) + (mu - mu_{i+1})(1 - eta_{i+1} lambda_max(W))`.
//! Both hold for any dual-feasible pair, so inexact multipliers only loosen
//! the bound.

use crate::dual::DualEval;
use crate::error::{Result, SrqError};
use crate::instance::SphereContext;

/// The two bounding lines of one interval in point-slope form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundLines {
    pub mu_i: f64,
    pub mu_ip1: f64,
    /// `q1(mu_i)`.
    pub q1_intercept: f64,
    pub q1_slope: f64,
    /// `q2(mu_ip1)`.
    pub q2_intercept: f64,
    pub q2_slope: f64,
}

impl BoundLines {
    pub fn q1(&self, mu: f64) -> f64 {
        self.q1_intercept + (mu - self.mu_i) * self.q1_slope
    }

    pub fn q2(&self, mu: f64) -> f64 {
        self.q2_intercept + (mu - self.mu_ip1) * self.q2_slope
    }

    /// `min(q1, q2)`, the concave overestimator.
    pub fn envelope(&self, mu: f64) -> f64 {
        self.q1(mu).min(self.q2(mu))
    }

    pub fn width(&self) -> f64 {
        self.mu_ip1 - self.mu_i
    }
}

/// Default width below which an interval is treated as a point.
pub fn default_width_floor(ctx: &SphereContext) -> f64 {
    1e-14 * (1.0 + ctx.mu_hi().abs())
}

pub fn build_lines(left: &DualEval, right: &DualEval, ctx: &SphereContext, width_floor: f64) -> Result<BoundLines> {
    if !(left.eta >= 0.0 && right.eta >= 0.0) {
        return Err(SrqError::PreconditionViolation("dual multipliers must be nonnegative"));
    }
    if !(right.mu - left.mu >= width_floor) || right.mu - left.mu <= 0.0 {
        return Err(SrqError::DegenerateInterval { lo: left.mu, hi: right.mu });
    }
    Ok(BoundLines {
        mu_i: left.mu,
        mu_ip1: right.mu,
        q1_intercept: left.q,
        q1_slope: 1.0 - left.eta * ctx.lam_min_w(),
        q2_intercept: right.q,
        q2_slope: 1.0 - right.eta * ctx.lam_max_w(),
    })
}

/// Where the maximum of the envelope sits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundCase {
    /// `eta_i lambda_min(W) >= 1`: q1 is nonincreasing.
    LeftEndpoint,
    /// `eta_{i+1} lambda_max(W) <= 1`: q2 is nondecreasing.
    RightEndpoint,
    /// The lines cross inside the interval.
    Crossing,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalBound {
    pub ub: f64,
    pub argmax_mu: f64,
    pub case: BoundCase,
}

/// Maximum of `min(q1, q2)` over the interval, in closed form.
pub fn interval_upper_bound(lines: &BoundLines) -> IntervalBound {
    let (a, b) = (lines.mu_i, lines.mu_ip1);
    let mut best = IntervalBound { ub: lines.envelope(a), argmax_mu: a, case: BoundCase::LeftEndpoint };
    let at_b = lines.envelope(b);
    if at_b > best.ub {
        best = IntervalBound { ub: at_b, argmax_mu: b, case: BoundCase::RightEndpoint };
    }
    let denom = lines.q1_slope - lines.q2_slope;
    if denom > 0.0 {
        let mu0 = (lines.q2_intercept - lines.q2_slope * b - lines.q1_intercept + lines.q1_slope * a) / denom;
        if mu0.is_finite() {
            let mu0 = mu0.clamp(a, b);
            let at_mu0 = lines.envelope(mu0);
            if at_mu0 > best.ub {
                best = IntervalBound { ub: at_mu0, argmax_mu: mu0, case: BoundCase::Crossing };
            }
        }
    }
    best
}

/// `q(mu) <= q(mu_i) + (mu - mu_i)` for every `mu >= mu_i`, including `mu_hi`.
pub fn slope_one_bound(left: &DualEval, mu: f64) -> Result<f64> {
    if !(mu >= left.mu) {
        return Err(SrqError::PreconditionViolation("slope-one bound needs mu >= left endpoint"));
    }
    Ok(left.q + (mu - left.mu))
}
