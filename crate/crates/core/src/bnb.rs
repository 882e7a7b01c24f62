//! Saw-tooth branch-and-bound over `[mu_lo, mu_hi - eps]`.
//!
//! Every open interval carries the maximum of its saw-tooth envelope. The
//! interval with the largest bound is bisected at its midpoint until that
//! bound is within `eps` of the incumbent. The strip `[mu_hi - eps, mu_hi]`
//! is covered by the slope-one bound anchored at `mu_hi - eps`.

use alloc::collections::BinaryHeap;
use alloc::rc::Rc;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::bounds::{build_lines, default_width_floor, interval_upper_bound, BoundLines, IntervalBound};
use crate::dual::{evaluate_q, q_at_mu_hi, DualConfig, DualEval};
use crate::error::{Result, SrqError};
use crate::instance::SphereContext;
use crate::report::{SolveReport, Status};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub eps: f64,
    pub dual: DualConfig,
    /// Defaults to `1e-14 (1 + |mu_hi|)`.
    pub width_floor: Option<f64>,
    /// Defaults to `ceil((mu_hi - mu_lo) / eps) + 8`.
    pub max_iter: Option<usize>,
    /// Also evaluate `q(mu_hi)` exactly through the pencil null space.
    pub eval_right_endpoint: bool,
    pub trace: bool,
}

impl SolverConfig {
    /// Tolerances tied to `eps`; the dual target is `eps / 100`.
    pub fn new(eps: f64) -> Self {
        Self {
            eps,
            dual: DualConfig { tau_dual: eps / 100.0, ..DualConfig::default() },
            width_floor: None,
            max_iter: None,
            eval_right_endpoint: false,
            trace: false,
        }
    }
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self::new(1e-5)
    }
}

/// An open interval with its bound.
#[derive(Debug, Clone)]
pub struct IntervalNode {
    pub left: Rc<DualEval>,
    pub right: Rc<DualEval>,
    pub ub: f64,
    pub argmax_mu: f64,
    pub lines: Option<BoundLines>,
}

impl IntervalNode {
    fn width(&self) -> f64 {
        self.right.mu - self.left.mu
    }
}

// Max-heap order: larger bound, then wider interval, then smaller left end.
impl Ord for IntervalNode {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ub
            .total_cmp(&other.ub)
            .then_with(|| self.width().total_cmp(&other.width()))
            .then_with(|| other.left.mu.total_cmp(&self.left.mu))
    }
}

impl PartialOrd for IntervalNode {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for IntervalNode {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for IntervalNode {}

/// One bisection step, for plotting and replay checks.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub k: usize,
    pub popped: (f64, f64),
    pub mu_mid: f64,
    pub q_mid: f64,
    /// Bounds of `[popped.0, mu_mid]` and `[mu_mid, popped.1]`.
    pub children: [ChildBound; 2],
    pub lb: f64,
    pub ub_star: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChildBound {
    pub lo: f64,
    pub hi: f64,
    pub q_lo: f64,
    pub q_hi: f64,
    pub lines: Option<BoundLines>,
    pub bound: IntervalBound,
}

/// The incumbent: best `q` found so far.
#[derive(Debug, Clone)]
pub struct Incumbent {
    pub mu: f64,
    pub q: f64,
    /// `None` when the incumbent is the exact top endpoint.
    pub eval: Option<Rc<DualEval>>,
}

/// Mutable search state of one solve call.
#[derive(Debug)]
pub struct SolverState {
    queue: BinaryHeap<IntervalNode>,
    pub lb: f64,
    pub incumbent: Incumbent,
    pub iterations: usize,
    pub dual_evals: usize,
    pub phi_evals: usize,
    pub lb_primal: f64,
    /// Bound on `q` over the part of `[mu_lo, mu_hi]` not covered by the queue.
    pub uncovered_cap: f64,
}

impl SolverState {
    /// Largest bound among open intervals, `-inf` when none are open.
    pub fn ub_star(&self) -> f64 {
        self.queue.peek().map_or(f64::NEG_INFINITY, |n| n.ub)
    }

    pub fn open_nodes(&self) -> usize {
        self.queue.len()
    }

    fn offer(&mut self, ctx: &SphereContext, eval: &Rc<DualEval>) {
        self.dual_evals += 1;
        self.phi_evals += eval.phi_evals;
        if let Ok(f) = ctx.objective(&eval.witness) {
            self.lb_primal = self.lb_primal.max(f);
        }
        if eval.q > self.lb {
            self.lb = eval.q;
            self.incumbent = Incumbent { mu: eval.mu, q: eval.q, eval: Some(eval.clone()) };
        }
    }
}

/// Optimality gap certified by the current state: the larger of the best open
/// bound and the cap on the uncovered strip, minus the incumbent value.
pub fn certified_gap(state: &SolverState) -> f64 {
    state.ub_star().max(state.uncovered_cap) - state.lb
}

fn make_node(ctx: &SphereContext, left: Rc<DualEval>, right: Rc<DualEval>, width_floor: f64) -> Result<IntervalNode> {
    match build_lines(&left, &right, ctx, width_floor) {
        Ok(lines) => {
            let b = interval_upper_bound(&lines);
            Ok(IntervalNode { left, right, ub: b.ub, argmax_mu: b.argmax_mu, lines: Some(lines) })
        }
        Err(SrqError::DegenerateInterval { .. }) => {
            // A point-like interval: the slope-one bound from its left end.
            let ub = left.q.max(right.q) + (right.mu - left.mu).max(0.0);
            let argmax_mu = right.mu;
            Ok(IntervalNode { left, right, ub, argmax_mu, lines: None })
        }
        Err(e) => Err(e),
    }
}

fn child_summary(node: &IntervalNode) -> ChildBound {
    let case = match &node.lines {
        Some(lines) => interval_upper_bound(lines).case,
        None => crate::bounds::BoundCase::RightEndpoint,
    };
    ChildBound {
        lo: node.left.mu,
        hi: node.right.mu,
        q_lo: node.left.q,
        q_hi: node.right.q,
        lines: node.lines,
        bound: IntervalBound { ub: node.ub, argmax_mu: node.argmax_mu, case },
    }
}

fn iteration_bound(ctx: &SphereContext, eps: f64) -> usize {
    let r = libm::ceil((ctx.mu_hi() - ctx.mu_lo()) / eps);
    if r.is_finite() && r >= 0.0 {
        r as usize
    } else {
        usize::MAX
    }
}

struct Traced {
    root: Option<ChildBound>,
    records: Vec<TraceRecord>,
}

fn finish(ctx: &SphereContext, state: SolverState, status: Status, bound: usize, trace: Traced) -> SolveReport {
    let ub = state.ub_star().max(state.uncovered_cap);
    let gap = certified_gap(&state);
    SolveReport {
        status,
        mu_lo: ctx.mu_lo(),
        mu_hi: ctx.mu_hi(),
        mu_star: state.incumbent.mu,
        q_star: state.incumbent.q,
        lb: state.lb,
        ub: Some(ub),
        gap: Some(gap),
        lb_primal: state.lb_primal,
        iterations: state.iterations,
        dual_evals: state.dual_evals,
        phi_evals: state.phi_evals,
        iteration_bound: Some(bound),
        open_nodes: state.queue.len(),
        incumbent: state.incumbent.eval.as_deref().cloned(),
        stage1_evals: None,
        root: trace.root,
        trace: trace.records,
    }
}

/// Runs the saw-tooth branch-and-bound and returns an `eps`-optimal `mu*`.
pub fn solve(ctx: &SphereContext, cfg: &SolverConfig) -> Result<SolveReport> {
    if !(cfg.eps > 0.0) {
        return Err(SrqError::PreconditionViolation("eps must be positive"));
    }
    let eps = cfg.eps;
    let (mu_lo, mu_hi) = (ctx.mu_lo(), ctx.mu_hi());
    let width_floor = cfg.width_floor.unwrap_or_else(|| default_width_floor(ctx));
    let bound = iteration_bound(ctx, eps);
    let max_iter = cfg.max_iter.unwrap_or(bound.saturating_add(8));

    if mu_hi - mu_lo <= width_floor {
        let (q, x) = q_at_mu_hi(ctx)?;
        let f = ctx.objective(&x).unwrap_or(f64::NEG_INFINITY);
        let state = SolverState {
            queue: BinaryHeap::new(),
            lb: q,
            incumbent: Incumbent { mu: mu_hi, q, eval: None },
            iterations: 0,
            dual_evals: 1,
            phi_evals: 0,
            lb_primal: f,
            uncovered_cap: q,
        };
        return Ok(finish(ctx, state, Status::DegenerateInterval, bound, Traced { root: None, records: Vec::new() }));
    }

    // Step 0: both ends of the search interval.
    let first = Rc::new(evaluate_q(ctx, mu_lo, &cfg.dual)?);
    let mut state = SolverState {
        queue: BinaryHeap::new(),
        lb: f64::NEG_INFINITY,
        incumbent: Incumbent { mu: mu_lo, q: first.q, eval: None },
        iterations: 1,
        dual_evals: 0,
        phi_evals: 0,
        lb_primal: f64::NEG_INFINITY,
        uncovered_cap: f64::NEG_INFINITY,
    };
    state.offer(ctx, &first);

    let mu_right = mu_hi - eps;
    if mu_right <= mu_lo {
        state.uncovered_cap = first.q + (mu_hi - mu_lo);
        return Ok(finish(ctx, state, Status::Optimal, bound, Traced { root: None, records: Vec::new() }));
    }
    let last = Rc::new(evaluate_q(ctx, mu_right, &cfg.dual)?);
    state.offer(ctx, &last);
    state.uncovered_cap = last.q + eps;

    if cfg.eval_right_endpoint {
        let (q, x) = q_at_mu_hi(ctx)?;
        state.dual_evals += 1;
        if let Ok(f) = ctx.objective(&x) {
            state.lb_primal = state.lb_primal.max(f);
        }
        if q > state.lb {
            state.lb = q;
            state.incumbent = Incumbent { mu: mu_hi, q, eval: None };
        }
    }

    let mut trace = Traced { root: None, records: Vec::new() };
    if cfg.trace {
        trace.root = Some(child_summary(&make_node(ctx, first.clone(), last.clone(), width_floor)?));
    }
    let mut current = (first, last);
    let status = loop {
        if state.iterations >= max_iter {
            let node = make_node(ctx, current.0, current.1, width_floor)?;
            state.queue.push(node);
            break Status::IterationCapped;
        }
        state.iterations += 1;

        // Step 1: bisect.
        let (left, right) = current;
        let mid_mu = 0.5 * (left.mu + right.mu);
        let mid = Rc::new(evaluate_q(ctx, mid_mu, &cfg.dual)?);
        state.offer(ctx, &mid);

        // Step 2: bound both halves.
        let lower = make_node(ctx, left.clone(), mid.clone(), width_floor)?;
        let upper = make_node(ctx, mid.clone(), right.clone(), width_floor)?;
        let children = [child_summary(&lower), child_summary(&upper)];
        state.queue.push(lower);
        state.queue.push(upper);

        // Step 3: stop or select the next interval.
        let ub_star = state.ub_star();
        if cfg.trace {
            trace.records.push(TraceRecord {
                k: state.iterations,
                popped: (left.mu, right.mu),
                mu_mid: mid.mu,
                q_mid: mid.q,
                children,
                lb: state.lb,
                ub_star,
            });
        }
        if ub_star <= state.lb + eps {
            break Status::Optimal;
        }
        let next = state.queue.pop().expect("queue holds the two new children");
        current = (next.left, next.right);
    };

    if status == Status::Optimal {
        debug_assert!(state.iterations <= bound.max(1), "iteration bound exceeded");
    }
    Ok(finish(ctx, state, status, bound, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Matrix;

    fn example2() -> SphereContext {
        SphereContext::from_sphere(
            Matrix::from_diag(&[1.0, 9.0, 2.0]),
            Matrix::from_diag(&[5.0, 2.0, 3.0]),
            Matrix::from_diag(&[5.0, 2.0, 3.0]),
        )
        .unwrap()
    }

    #[test]
    fn example2_finds_top_region() {
        let r = solve(&example2(), &SolverConfig::default()).unwrap();
        assert_eq!(r.status, Status::Optimal);
        assert!((r.mu_star - 4.5).abs() < 1e-3);
        assert!((r.q_star - 6.5).abs() < 1e-4);
        assert!(r.gap.unwrap() <= 1e-5 + 2e-7);
    }

    #[test]
    fn right_endpoint_evaluation() {
        let cfg = SolverConfig { eval_right_endpoint: true, ..SolverConfig::default() };
        let r = solve(&example2(), &cfg).unwrap();
        assert_eq!(r.mu_star, 4.5);
        assert!((r.q_star - 6.5).abs() < 1e-12);
        assert!(r.incumbent.is_none());
    }

    #[test]
    fn wide_eps_exits_at_step_zero() {
        let r = solve(&example2(), &SolverConfig::new(10.0)).unwrap();
        assert_eq!(r.status, Status::Optimal);
        assert!((r.mu_star - 0.2).abs() < 1e-15);
        assert_eq!(r.dual_evals, 1);
        assert!((r.gap.unwrap() - 4.3).abs() < 1e-12);
    }

    #[test]
    fn proportional_pencil_is_degenerate() {
        let w = Matrix::from_diag(&[1.0, 2.0]);
        let ctx = SphereContext::from_sphere(w.scale(3.0), w, Matrix::from_diag(&[1.0, 4.0])).unwrap();
        let r = solve(&ctx, &SolverConfig::default()).unwrap();
        assert_eq!(r.status, Status::DegenerateInterval);
        assert!((r.q_star - 7.0).abs() < 1e-10);
    }

    #[test]
    fn iteration_cap_reports_status() {
        let cfg = SolverConfig { max_iter: Some(1), ..SolverConfig::default() };
        let ctx = SphereContext::from_sphere(
            Matrix::from_rows([[1.0, 2.0, 3.0], [2.0, 5.0, 4.0], [3.0, 4.0, 0.0]]),
            Matrix::from_diag(&[2.0, 1.0, 5.0]),
            Matrix::from_rows([[5.0, -1.0, 0.0], [-1.0, 9.0, 1.0], [0.0, 1.0, -2.0]]),
        )
        .unwrap();
        let r = solve(&ctx, &cfg).unwrap();
        assert_eq!(r.status, Status::IterationCapped);
        assert!(r.ub.unwrap() >= r.lb);
    }
}
