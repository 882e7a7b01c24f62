use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};
use srq_core::{generate_random, GeneratorSpec};

use crate::bench::{self, BenchOptions};
use crate::error::{CliError, Result};
use crate::examples;
use crate::format;
use crate::pipeline::{self, Algorithm, ReportJson, SolveOptions};
use crate::trace;

#[derive(Debug, Parser)]
#[command(name = "srq", version, about = "Global maximization of the sum of two generalized Rayleigh quotients")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve an instance file and print a JSON report.
    Solve(SolveArgs),
    /// Solve the built-in instances and compare with reference results.
    Examples(ExamplesArgs),
    /// Benchmark on random instances; CSV on stdout.
    Bench(BenchArgs),
    /// Emit the bound segments of a branch-and-bound run as JSON lines.
    Trace(TraceArgs),
    /// Print a random instance as JSON.
    Generate(GenerateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlgorithmArg {
    Bnb,
    TwoStage,
    Both,
}

impl AlgorithmArg {
    fn expand(self) -> Vec<Algorithm> {
        match self {
            AlgorithmArg::Bnb => vec![Algorithm::Bnb],
            AlgorithmArg::TwoStage => vec![Algorithm::TwoStage],
            AlgorithmArg::Both => vec![Algorithm::Bnb, Algorithm::TwoStage],
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SolverArgs {
    /// Optimality tolerance of the branch-and-bound.
    #[arg(long, default_value_t = 1e-5)]
    pub eps: f64,
    /// Grid step of the two-stage heuristic.
    #[arg(long, default_value_t = 0.05)]
    pub delta: f64,
    /// Also evaluate q exactly at the top of the pencil interval.
    #[arg(long)]
    pub eval_right_endpoint: bool,
    /// Cap on branch-and-bound iterations.
    #[arg(long)]
    pub max_iter: Option<usize>,
}

impl SolverArgs {
    fn options(&self) -> Result<SolveOptions> {
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            return Err(CliError::Input("--eps must be positive".into()));
        }
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(CliError::Input("--delta must be positive".into()));
        }
        Ok(SolveOptions {
            eps: self.eps,
            delta: self.delta,
            eval_right_endpoint: self.eval_right_endpoint,
            max_iter: self.max_iter,
            trace: false,
        })
    }
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    /// Instance file (JSON).
    pub instance: PathBuf,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long, value_enum, default_value_t = AlgorithmArg::Bnb)]
    pub algorithm: AlgorithmArg,
    /// Write the branch-and-bound trace (JSON lines) to this file.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Report `wall_time_ms` as null so output is reproducible byte for byte.
    #[arg(long)]
    pub no_timing: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ExamplesArgs {
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    /// Problem sizes, comma separated.
    #[arg(long = "n", value_delimiter = ',', default_values_t = bench::DEFAULT_SIZES.to_vec())]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 10)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Diagonal shift of the generated definite matrices.
    #[arg(long, default_value_t = 1.0)]
    pub delta_gen: f64,
    #[arg(long, value_enum, default_value_t = AlgorithmArg::Both)]
    pub algorithm: AlgorithmArg,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Leave `time_ms` empty so output is reproducible byte for byte.
    #[arg(long)]
    pub no_timing: bool,
}

#[derive(Debug, Clone, Args)]
pub struct TraceArgs {
    /// Instance file (JSON).
    pub instance: PathBuf,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Write to this file instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct GenerateArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1.0)]
    pub delta_gen: f64,
    /// Entries of B, D and the bidiagonal factors are drawn from [-range, range].
    #[arg(long, default_value_t = 10.0)]
    pub range: f64,
}

fn create(path: &PathBuf) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::Input(format!("cannot create {}: {e}", path.display())))
}

fn cmd_solve(args: &SolveArgs, out: &mut dyn Write) -> Result<i32> {
    let inst = format::read_instance(&args.instance)?;
    let opts = args.solver.options()?;
    let mut code = 0;
    let mut reports = Map::new();
    for alg in args.algorithm.expand() {
        let traced = alg == Algorithm::Bnb && args.trace.is_some();
        let run_opts = SolveOptions { trace: traced, ..opts.clone() };
        let outcome = pipeline::run(&inst, alg, &run_opts)?;
        if let (true, Some(path)) = (traced, &args.trace) {
            trace::write_records(&trace::records(&outcome.report), create(path)?)?;
        }
        if !outcome.succeeded() {
            code = 2;
        }
        let json = serde_json::to_value(ReportJson::new(&outcome, !args.no_timing))?;
        reports.insert(alg.as_str().replace('-', "_"), json);
    }
    let value = if reports.len() == 1 {
        reports.into_iter().next().map(|(_, v)| v).unwrap_or(Value::Null)
    } else {
        Value::Object(reports)
    };
    serde_json::to_writer_pretty(&mut *out, &value)?;
    writeln!(out)?;
    Ok(code)
}

fn cmd_examples(args: &ExamplesArgs, out: &mut dyn Write) -> Result<i32> {
    let rows = examples::solve_all(&args.solver.options()?)?;
    examples::write_table(&rows, out)?;
    Ok(0)
}

fn cmd_bench(args: &BenchArgs, out: &mut dyn Write) -> Result<i32> {
    if args.sizes.iter().any(|&n| n < 2) {
        return Err(CliError::Input("--n values must be at least 2".into()));
    }
    let opts = BenchOptions {
        sizes: args.sizes.clone(),
        trials: args.trials,
        seed: args.seed,
        delta_gen: args.delta_gen,
        algorithms: args.algorithm.expand(),
        solve: args.solver.options()?,
        timing: !args.no_timing,
    };
    bench::write_csv(&opts, out)?;
    Ok(0)
}

fn cmd_trace(args: &TraceArgs, out: &mut dyn Write) -> Result<i32> {
    let inst = format::read_instance(&args.instance)?;
    let opts = SolveOptions { trace: true, ..args.solver.options()? };
    let outcome = pipeline::run(&inst, Algorithm::Bnb, &opts)?;
    let records = trace::records(&outcome.report);
    match &args.output {
        Some(path) => trace::write_records(&records, create(path)?)?,
        None => trace::write_records(&records, out)?,
    }
    Ok(if outcome.succeeded() { 0 } else { 2 })
}

fn cmd_generate(args: &GenerateArgs, out: &mut dyn Write) -> Result<i32> {
    let spec = GeneratorSpec { n: args.n, delta: args.delta_gen, seed: args.seed, range: args.range };
    let inst = generate_random(&spec).map_err(|e| CliError::Input(e.to_string()))?;
    writeln!(out, "{}", format::instance_to_json(&inst)?)?;
    Ok(0)
}

/// Runs a parsed command, returning the process exit code. Diagnostics go
/// to `err`.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match &cli.command {
        Command::Solve(a) => cmd_solve(a, out),
        Command::Examples(a) => cmd_examples(a, out),
        Command::Bench(a) => cmd_bench(a, out),
        Command::Trace(a) => cmd_trace(a, out),
        Command::Generate(a) => cmd_generate(a, out),
    };
    match result.and_then(|code| out.flush().map(|_| code).map_err(Into::into)) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "srq: {e}");
            e.exit_code()
        }
    }
}
