use alloc::vec::Vec;

use crate::bnb::{ChildBound, TraceRecord};
use crate::dual::DualEval;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    /// The `eps` certificate was met.
    Optimal,
    /// The iteration cap was hit before the certificate.
    IterationCapped,
    /// `mu_lo == mu_hi`; `q` was evaluated exactly at the single point.
    DegenerateInterval,
    /// Two-stage heuristic: no certificate.
    Heuristic,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Optimal => "Optimal",
            Status::IterationCapped => "IterationCapped",
            Status::DegenerateInterval => "DegenerateInterval",
            Status::Heuristic => "Heuristic",
        }
    }
}

/// Outcome of one solve, branch-and-bound or heuristic.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub status: Status,
    pub mu_lo: f64,
    pub mu_hi: f64,
    pub mu_star: f64,
    pub q_star: f64,
    /// Best `q` found (equals `q_star`).
    pub lb: f64,
    /// Certified upper bound on the optimal value; `None` for the heuristic.
    pub ub: Option<f64>,
    /// `ub - lb`.
    pub gap: Option<f64>,
    /// Largest sphere objective over all witness vectors seen; a rigorous
    /// lower bound on the optimal value.
    pub lb_primal: f64,
    /// Branch-and-bound: passes including the initial one. Heuristic: grid evaluations.
    pub iterations: usize,
    /// Evaluations of `q`.
    pub dual_evals: usize,
    /// Largest-eigenvalue computations spent inside the dual evaluations.
    pub phi_evals: usize,
    /// Upper bound on iterations, `ceil((mu_hi - mu_lo) / eps)`.
    pub iteration_bound: Option<usize>,
    /// Open intervals left at termination.
    pub open_nodes: usize,
    /// Dual evaluation at `mu_star`; `None` when `mu_star` is the pencil top.
    pub incumbent: Option<DualEval>,
    pub stage1_evals: Option<usize>,
    /// Bound on the initial search interval, recorded with tracing on.
    pub root: Option<ChildBound>,
    pub trace: Vec<TraceRecord>,
}
