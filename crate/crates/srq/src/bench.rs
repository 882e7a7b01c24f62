//! Random-instance benchmark with CSV output.

use std::io::Write;

use serde::Serialize;
use srq_core::{generate_random, GeneratorSpec};

use crate::error::Result;
use crate::pipeline::{self, Algorithm, SolveOptions};

pub const DEFAULT_SIZES: [usize; 8] = [30, 50, 80, 100, 120, 150, 180, 200];

#[derive(Debug, Clone)]
pub struct BenchOptions {
    pub sizes: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub delta_gen: f64,
    pub algorithms: Vec<Algorithm>,
    pub solve: SolveOptions,
    pub timing: bool,
}

impl Default for BenchOptions {
    fn default() -> Self {
        Self {
            sizes: DEFAULT_SIZES.to_vec(),
            trials: 10,
            seed: 0,
            delta_gen: 1.0,
            algorithms: vec![Algorithm::Bnb, Algorithm::TwoStage],
            solve: SolveOptions::default(),
            timing: true,
        }
    }
}

pub const HEADER: [&str; 9] =
    ["n", "trial", "algorithm", "iterations", "dual_evals", "time_ms", "q_star", "gap", "status"];

/// One CSV row. Columns left empty for a failed trial or a missing value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub trial: usize,
    pub algorithm: &'static str,
    pub iterations: Option<usize>,
    pub dual_evals: Option<usize>,
    pub time_ms: Option<f64>,
    pub q_star: Option<f64>,
    pub gap: Option<f64>,
    pub status: String,
}

/// Seed of the instance for trial `trial` at size `n`.
pub fn instance_seed(seed: u64, n: usize, trial: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ ((n as u64) << 32) ^ trial as u64
}

fn row(n: usize, trial: usize, algorithm: Algorithm, opts: &BenchOptions) -> BenchRow {
    let mut row = BenchRow {
        n,
        trial,
        algorithm: algorithm.as_str(),
        iterations: None,
        dual_evals: None,
        time_ms: None,
        q_star: None,
        gap: None,
        status: String::new(),
    };
    let spec = GeneratorSpec { n, delta: opts.delta_gen, seed: instance_seed(opts.seed, n, trial), range: 10.0 };
    let outcome =
        generate_random(&spec).map_err(Into::into).and_then(|inst| pipeline::run(&inst, algorithm, &opts.solve));
    match outcome {
        Ok(o) => {
            row.iterations = Some(o.report.iterations);
            row.dual_evals = Some(o.report.dual_evals);
            row.time_ms = opts.timing.then_some(o.elapsed_ms);
            row.q_star = Some(o.report.q_star);
            row.gap = o.report.gap;
            row.status = o.report.status.as_str().to_string();
        }
        Err(e) => row.status = format!("error: {e}"),
    }
    row
}

/// Runs every trial, calling `sink` with each row in `(n, trial, algorithm)` order.
pub fn run<F: FnMut(&BenchRow) -> Result<()>>(opts: &BenchOptions, mut sink: F) -> Result<()> {
    for &n in &opts.sizes {
        for trial in 0..opts.trials {
            for &alg in &opts.algorithms {
                sink(&row(n, trial, alg, opts))?;
            }
        }
    }
    Ok(())
}

/// Runs the benchmark and streams CSV to `out`.
pub fn write_csv<W: Write>(opts: &BenchOptions, out: W) -> Result<()> {
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    writer.write_record(HEADER)?;
    run(opts, |row| {
        writer.serialize(row)?;
        writer.flush()?;
        Ok(())
    })?;
    writer.flush()?;
    Ok(())
}
