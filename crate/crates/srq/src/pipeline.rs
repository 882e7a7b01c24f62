//! Whitening, solving and recovery, with the JSON report.

use std::time::Instant;

use serde::Serialize;
use srq_core::{
    recover_at_mu_hi, recover_solution, solve, two_stage_solve, HeuristicConfig, Recovered, SolveReport, SolverConfig,
    SphereContext, SrqInstance, Status,
};

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Bnb,
    TwoStage,
}

impl Algorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Bnb => "bnb",
            Algorithm::TwoStage => "two-stage",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub eps: f64,
    pub delta: f64,
    pub eval_right_endpoint: bool,
    pub max_iter: Option<usize>,
    pub trace: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { eps: 1e-5, delta: 0.05, eval_right_endpoint: false, max_iter: None, trace: false }
    }
}

impl SolveOptions {
    pub fn solver_config(&self) -> SolverConfig {
        let mut cfg = SolverConfig::new(self.eps);
        cfg.eval_right_endpoint = self.eval_right_endpoint;
        cfg.max_iter = self.max_iter;
        cfg.trace = self.trace;
        cfg
    }

    pub fn heuristic_config(&self) -> HeuristicConfig {
        HeuristicConfig::new(self.delta)
    }
}

/// One solve with its recovered vector.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub algorithm: Algorithm,
    pub report: SolveReport,
    /// Recovered unit vector in whitened coordinates.
    pub recovered: Recovered,
    /// Recovered unit vector in the instance's own coordinates.
    pub x_star: Vec<f64>,
    /// Objective of the instance at `x_star`.
    pub f_star: f64,
    pub elapsed_ms: f64,
}

impl Outcome {
    /// Status acceptable for a zero exit code.
    pub fn succeeded(&self) -> bool {
        !matches!(self.report.status, Status::IterationCapped)
    }
}

pub fn recover(ctx: &SphereContext, report: &SolveReport) -> Result<Recovered> {
    Ok(match &report.incumbent {
        Some(eval) => recover_solution(ctx, eval)?,
        None => recover_at_mu_hi(ctx)?,
    })
}

pub fn run(inst: &SrqInstance, algorithm: Algorithm, opts: &SolveOptions) -> Result<Outcome> {
    let start = Instant::now();
    let ctx = inst.whiten()?;
    let report = match algorithm {
        Algorithm::Bnb => solve(&ctx, &opts.solver_config())?,
        Algorithm::TwoStage => two_stage_solve(&ctx, &opts.heuristic_config())?,
    };
    let recovered = recover(&ctx, &report)?;
    let x_star = ctx.to_original(&recovered.x)?;
    let f_star = inst.objective(&x_star)?;
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(Outcome { algorithm, report, recovered, x_star, f_star, elapsed_ms })
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportJson {
    pub algorithm: &'static str,
    pub status: &'static str,
    pub mu_lo: f64,
    pub mu_hi: f64,
    pub mu_star: f64,
    pub q_star: f64,
    pub x_star: Vec<f64>,
    pub f_star: f64,
    pub lb: f64,
    pub ub: Option<f64>,
    pub gap: Option<f64>,
    pub lb_primal: f64,
    pub iterations: usize,
    pub dual_evals: usize,
    pub phi_evals: usize,
    pub iteration_bound: Option<usize>,
    pub stage1_evals: Option<usize>,
    pub recovery_residual: f64,
    pub wall_time_ms: Option<f64>,
}

impl ReportJson {
    pub fn new(outcome: &Outcome, timing: bool) -> Self {
        let r = &outcome.report;
        Self {
            algorithm: outcome.algorithm.as_str(),
            status: r.status.as_str(),
            mu_lo: r.mu_lo,
            mu_hi: r.mu_hi,
            mu_star: r.mu_star,
            q_star: r.q_star,
            x_star: outcome.x_star.clone(),
            f_star: outcome.f_star,
            lb: r.lb,
            ub: r.ub,
            gap: r.gap,
            lb_primal: r.lb_primal,
            iterations: r.iterations,
            dual_evals: r.dual_evals,
            phi_evals: r.phi_evals,
            iteration_bound: r.iteration_bound,
            stage1_evals: r.stage1_evals,
            recovery_residual: outcome.recovered.residual,
            wall_time_ms: timing.then_some(outcome.elapsed_ms),
        }
    }
}
