//! The built-in instances solved by both algorithms and compared with
//! their reference results.

use std::io::Write;

use srq_core::catalog::{self, CatalogEntry};

use crate::error::Result;
use crate::pipeline::{self, Algorithm, Outcome, SolveOptions};

#[derive(Debug, Clone)]
pub struct ExampleRow {
    pub entry: CatalogEntry,
    pub bnb: Outcome,
    pub two_stage: Outcome,
}

fn round4(x: f64) -> f64 {
    (x * 1e4).round() / 1e4
}

impl ExampleRow {
    pub fn range_ok(&self) -> bool {
        let r = &self.bnb.report;
        round4(r.mu_lo) == self.entry.expected.mu_lo && round4(r.mu_hi) == self.entry.expected.mu_hi
    }

    pub fn mu_star_ok(&self) -> bool {
        (self.bnb.report.mu_star - self.entry.expected.bnb_mu_star).abs() <= 1e-3
    }

    /// Ratio of our iteration count to the reference count.
    pub fn iteration_ratio(&self) -> f64 {
        self.bnb.report.iterations as f64 / self.entry.expected.bnb_iterations as f64
    }

    pub fn iterations_ok(&self) -> bool {
        (0.5..=2.0).contains(&self.iteration_ratio())
    }

    pub fn stage1_ok(&self) -> bool {
        self.two_stage.report.stage1_evals == Some(self.entry.expected.stage1_evals)
    }
}

pub fn solve_all(opts: &SolveOptions) -> Result<Vec<ExampleRow>> {
    catalog::all()
        .into_iter()
        .map(|entry| {
            let bnb = pipeline::run(&entry.instance, Algorithm::Bnb, opts)?;
            let two_stage = pipeline::run(&entry.instance, Algorithm::TwoStage, opts)?;
            Ok(ExampleRow { entry, bnb, two_stage })
        })
        .collect()
}

fn flag(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAIL"
    }
}

pub fn write_table<W: Write>(rows: &[ExampleRow], mut out: W) -> Result<()> {
    writeln!(
        out,
        "{:<3} {:<20} {:<6} {:<18} {:<6} {:<13} {:<6} {:<18} {:<15} {:<6} {:<18} {:<6}",
        "ex",
        "range",
        "check",
        "bnb mu* (ref)",
        "check",
        "iters (ref)",
        "check",
        "two-stage mu*",
        "stage-1 (ref)",
        "check",
        "q*",
        "f(x*)"
    )?;
    for r in rows {
        let e = &r.entry.expected;
        let b = &r.bnb.report;
        let t = &r.two_stage.report;
        let ts_ref = e.two_stage_mu_star.map_or("-".to_string(), |v| format!("{v}"));
        writeln!(
            out,
            "{:<3} {:<20} {:<6} {:<18} {:<6} {:<13} {:<6} {:<18} {:<15} {:<6} {:<18} {:<6}",
            r.entry.id,
            format!("[{:.4}, {:.4}]", b.mu_lo, b.mu_hi),
            flag(r.range_ok()),
            format!("{:.4} ({})", b.mu_star, e.bnb_mu_star),
            flag(r.mu_star_ok()),
            format!("{} ({})", b.iterations, e.bnb_iterations),
            flag(r.iterations_ok()),
            format!("{:.4} ({ts_ref})", t.mu_star),
            format!("{} ({})", t.stage1_evals.unwrap_or(0), e.stage1_evals),
            flag(r.stage1_ok()),
            format!("{:.6}", b.q_star),
            format!("{:.6}", r.bnb.f_star),
        )?;
    }
    Ok(())
}
