//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero when any
//! criterion fails.

use std::time::{Duration, Instant};

use clap::Parser;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use srq::bench::{self, BenchOptions};
use srq::cli::{self, Cli};
use srq::pipeline::{self, Algorithm, SolveOptions};
use srq_core::catalog::{self, CatalogEntry};
use srq_core::matrix::norm;
use srq_core::*;

const EPS: f64 = 1e-5;
const DELTA: f64 = 0.05;
const RANGE_DECIMALS: f64 = 1e4;
const MU_STAR_TOL: f64 = 1e-3;
const ITERATION_FACTOR: f64 = 2.0;
const ORACLE_TOL: f64 = 1e-6;
const LINE_MAX_TOL: f64 = 1e-9;
const UNIT_TOL: f64 = 1e-12;
const RECOVERY_TOL: f64 = 1e-4;
const COORDINATE_TOL: f64 = 1e-9;
const BENCH_EVALS: (usize, usize) = (10, 500);

type Criterion = (&'static str, fn() -> Verdict);

struct Verdict {
    pass: bool,
    detail: String,
}

impl Verdict {
    fn new(pass: bool, detail: String) -> Self {
        Self { pass, detail }
    }
}

fn whiten(entry: &CatalogEntry) -> SphereContext {
    entry.instance.whiten().unwrap()
}

fn random_instance(n: usize, seed: u64) -> SrqInstance {
    generate_random(&GeneratorSpec::new(n, seed)).unwrap()
}

fn lerp(a: f64, b: f64, t: f64) -> f64 {
    a + t * (b - a)
}

fn secs(d: Duration) -> String {
    format!("{:.3}s", d.as_secs_f64())
}

fn pencil_ranges() -> Verdict {
    let start = Instant::now();
    let mut pass = true;
    let mut parts = Vec::new();
    for entry in catalog::all() {
        let ctx = whiten(&entry);
        let lo = (ctx.mu_lo() * RANGE_DECIMALS).round() / RANGE_DECIMALS;
        let hi = (ctx.mu_hi() * RANGE_DECIMALS).round() / RANGE_DECIMALS;
        pass &= lo == entry.expected.mu_lo && hi == entry.expected.mu_hi;
        parts.push(format!("ex{} [{lo}, {hi}]", entry.id));
    }
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(1);
    Verdict::new(pass, format!("{} in {}", parts.join(" "), secs(elapsed)))
}

fn bnb_solutions() -> Verdict {
    let start = Instant::now();
    let cfg = SolverConfig::new(EPS);
    let mut mu_ok = true;
    let mut cert_ok = true;
    let mut iter_ok = true;
    let mut parts = Vec::new();
    for entry in catalog::all() {
        let report = solve(&whiten(&entry), &cfg).unwrap();
        let e = entry.expected;
        mu_ok &= (report.mu_star - e.bnb_mu_star).abs() <= MU_STAR_TOL;
        cert_ok &= report.ub.unwrap() - report.q_star <= EPS + 2.0 * cfg.dual.tau_dual;
        let ratio = report.iterations as f64 / e.bnb_iterations as f64;
        iter_ok &= (1.0 / ITERATION_FACTOR..=ITERATION_FACTOR).contains(&ratio);
        parts.push(format!(
            "ex{} mu*={:.4} iters={} (ref {}, x{ratio:.2})",
            entry.id, report.mu_star, report.iterations, e.bnb_iterations
        ));
    }
    let elapsed = start.elapsed();
    let time_ok = elapsed < Duration::from_secs(30);
    Verdict::new(
        mu_ok && cert_ok && iter_ok && time_ok,
        format!(
            "mu* {} | certificate {} | iterations within 2x {} | {} | {}",
            ok(mu_ok),
            ok(cert_ok),
            ok(iter_ok),
            parts.join("; "),
            secs(elapsed)
        ),
    )
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "FAIL"
    }
}

fn iteration_cap() -> Verdict {
    let cfg = SolverConfig::new(EPS);
    let mut contexts: Vec<SphereContext> = catalog::all().iter().map(whiten).collect();
    contexts.extend((0..20).map(|s| random_instance(2 + s % 5, 1000 + s as u64).whiten().unwrap()));
    let mut worst = 0.0f64;
    let mut pass = true;
    for ctx in &contexts {
        let report = solve(ctx, &cfg).unwrap();
        let cap = ((ctx.mu_hi() - ctx.mu_lo()) / EPS).ceil() as usize;
        pass &= report.status == Status::Optimal && report.iterations <= cap;
        worst = worst.max(report.iterations as f64 / cap as f64);
    }
    Verdict::new(pass, format!("{} instances, max iterations/cap = {worst:.2e}", contexts.len()))
}

fn stage1_counts() -> Verdict {
    let cfg = HeuristicConfig::new(DELTA);
    let mut pass = true;
    let mut parts = Vec::new();
    for entry in catalog::all() {
        let report = two_stage_solve(&whiten(&entry), &cfg).unwrap();
        let count = report.stage1_evals.unwrap();
        pass &= count == entry.expected.stage1_evals;
        parts.push(format!("ex{} {count} (ref {})", entry.id, entry.expected.stage1_evals));
    }
    Verdict::new(pass, parts.join(", "))
}

fn oracle_equivalence() -> Verdict {
    let start = Instant::now();
    let dual = DualConfig::default();
    let mut worst = 0.0f64;
    let mut failures = 0;
    for seed in 0..20 {
        let dense = random_instance(10, 2000 + seed);
        let (b, w, d) = (dense.b().diag(), dense.w().diag(), dense.d().diag());
        let ctx =
            SphereContext::from_sphere(Matrix::from_diag(&b), Matrix::from_diag(&w), Matrix::from_diag(&d)).unwrap();
        for k in 0..100 {
            let mu = lerp(ctx.mu_lo(), ctx.mu_hi(), k as f64 / 100.0);
            let nu = evaluate_q(&ctx, mu, &dual).unwrap().nu;
            let err = (nu - diagonal_oracle(&b, &w, &d, mu).unwrap()).abs();
            worst = worst.max(err);
            failures += usize::from(err > ORACLE_TOL);
        }
    }
    let elapsed = start.elapsed();
    Verdict::new(
        failures == 0 && elapsed < Duration::from_secs(10),
        format!("2000 points, max |nu - oracle| = {worst:.2e}, {}", secs(elapsed)),
    )
}

/// Maximum of a concave function: grid scan, then ternary search on the
/// cells around the best grid point.
fn concave_grid_max(f: impl Fn(f64) -> f64, a: f64, b: f64, points: usize) -> (f64, f64) {
    let at = |k: usize| lerp(a, b, k as f64 / points as f64);
    let best = (0..=points).max_by(|&i, &j| f(at(i)).total_cmp(&f(at(j)))).unwrap();
    let grid = f(at(best));
    let (mut lo, mut hi) = (at(best.saturating_sub(1)), at((best + 1).min(points)));
    for _ in 0..200 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if f(m1) < f(m2) {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    (grid, grid.max(f(0.5 * (lo + hi))))
}

fn saw_tooth_validity() -> Verdict {
    let dual = DualConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst_excess = f64::NEG_INFINITY;
    let mut worst_line_gap = 0.0f64;
    let mut below_grid = false;
    let mut intervals = 0;
    for s in 0..20u64 {
        let ctx = random_instance(2 + (s as usize) % 5, 3000 + s).whiten().unwrap();
        for _ in 0..3 {
            let t1: f64 = rng.gen_range(0.0..0.999);
            let t2: f64 = rng.gen_range(0.0..0.999);
            let (a, b) = (lerp(ctx.mu_lo(), ctx.mu_hi(), t1.min(t2)), lerp(ctx.mu_lo(), ctx.mu_hi(), t1.max(t2)));
            if b - a < 1e-6 {
                continue;
            }
            intervals += 1;
            let left = evaluate_q(&ctx, a, &dual).unwrap();
            let right = evaluate_q(&ctx, b, &dual).unwrap();
            let lines = build_lines(&left, &right, &ctx, 1e-14).unwrap();
            for _ in 0..50 {
                let mu = rng.gen_range(a..=b);
                let q = evaluate_q(&ctx, mu, &dual).unwrap().q;
                worst_excess = worst_excess.max(q - lines.envelope(mu));
            }
            let ub = interval_upper_bound(&lines).ub;
            let (grid, refined) = concave_grid_max(|mu| lines.envelope(mu), a, b, 10_000);
            below_grid |= ub < grid - LINE_MAX_TOL;
            worst_line_gap = worst_line_gap.max((ub - refined).abs());
        }
    }
    let pass = worst_excess <= 3.0 * dual.tau_dual && worst_line_gap <= LINE_MAX_TOL && !below_grid;
    Verdict::new(
        pass,
        format!(
            "{intervals} intervals, max q - envelope = {worst_excess:.2e} (allowed {:.0e}), |U - grid max| = {worst_line_gap:.2e}",
            3.0 * dual.tau_dual
        ),
    )
}

fn global_soundness() -> Verdict {
    let start = Instant::now();
    let cfg = SolverConfig::new(EPS);
    let mut worst = f64::NEG_INFINITY;
    for s in 0..10u64 {
        let ctx = random_instance(2 + (s as usize) % 4, 4000 + s).whiten().unwrap();
        let report = solve(&ctx, &cfg).unwrap();
        let (top, _) = q_at_mu_hi(&ctx).unwrap();
        let grid = (0..10_000)
            .map(|k| evaluate_q(&ctx, lerp(ctx.mu_lo(), ctx.mu_hi(), k as f64 / 1e4), &cfg.dual).unwrap().q)
            .fold(top, f64::max);
        worst = worst.max(grid - report.q_star);
    }
    let allowed = EPS + 5.0 * cfg.dual.tau_dual;
    Verdict::new(
        worst <= allowed,
        format!("max grid q - q* = {worst:.2e} (allowed {allowed:.2e}), {}", secs(start.elapsed())),
    )
}

fn recovery() -> Verdict {
    let opts = SolveOptions { eps: EPS, ..SolveOptions::default() };
    let mut pass = true;
    let mut parts = Vec::new();
    for entry in catalog::all() {
        let outcome = pipeline::run(&entry.instance, Algorithm::Bnb, &opts).unwrap();
        let ctx = whiten(&entry);
        let y = &outcome.recovered.x;
        let f_sphere = ctx.objective(y).unwrap();
        let unit = (norm(y) - 1.0).abs();
        let tight = (f_sphere - outcome.report.q_star).abs();
        let coords = (outcome.f_star - f_sphere).abs();
        pass &= unit <= UNIT_TOL && tight <= RECOVERY_TOL && coords <= COORDINATE_TOL;
        parts.push(format!("ex{} |f-q|={tight:.1e}", entry.id));
    }
    Verdict::new(pass, parts.join(", "))
}

fn bench_scale() -> Verdict {
    let opts = BenchOptions {
        sizes: vec![30, 100, 200],
        trials: 3,
        seed: 0,
        algorithms: vec![Algorithm::Bnb],
        ..BenchOptions::default()
    };
    let mut rows = Vec::new();
    bench::run(&opts, |row| {
        rows.push(row.clone());
        Ok(())
    })
    .unwrap();
    let pass = rows.len() == 9
        && rows.iter().all(|r| {
            r.status == "Optimal" && r.dual_evals.is_some_and(|e| (BENCH_EVALS.0..=BENCH_EVALS.1).contains(&e))
        });
    let summary: Vec<String> = rows
        .iter()
        .map(|r| format!("n{}t{} {} evals {:.0}ms", r.n, r.trial, r.dual_evals.unwrap_or(0), r.time_ms.unwrap_or(0.0)))
        .collect();
    Verdict::new(pass, summary.join(", "))
}

fn capture(args: &[&str]) -> (i32, Vec<u8>) {
    let cli = Cli::try_parse_from(args).unwrap();
    let mut out = Vec::new();
    let code = cli::run(&cli, &mut out, &mut std::io::sink());
    (code, out)
}

fn determinism() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("instance.json");
    let json = srq::format::instance_to_json(&random_instance(6, 5000)).unwrap();
    std::fs::write(&path, json).unwrap();
    let file = path.to_str().unwrap();
    let runs: Vec<(&str, Vec<&str>)> = vec![
        ("solve", vec!["srq", "solve", file, "--algorithm", "both", "--no-timing"]),
        ("trace", vec!["srq", "trace", file, "--eps", "1e-4"]),
        ("bench", vec!["srq", "bench", "--n", "8,12", "--trials", "2", "--seed", "17", "--no-timing"]),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, args) in runs {
        let (c1, a) = capture(&args);
        let (c2, b) = capture(&args);
        pass &= c1 == 0 && c2 == 0 && a == b && !a.is_empty();
        parts.push(format!("{name} {} bytes", a.len()));
    }
    Verdict::new(pass, parts.join(", "))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("pencil ranges", pencil_ranges),
        ("branch-and-bound solutions", bnb_solutions),
        ("iteration cap", iteration_cap),
        ("stage-1 evaluation counts", stage1_counts),
        ("diagonal oracle equivalence", oracle_equivalence),
        ("saw-tooth validity", saw_tooth_validity),
        ("global soundness", global_soundness),
        ("recovery", recovery),
        ("bench scale", bench_scale),
        ("determinism", determinism),
    ];
    let mut failed = Vec::new();
    for (k, (name, check)) in criteria.iter().enumerate() {
        let v = check();
        println!("[{}] {:>2} {name}: {}", if v.pass { "PASS" } else { "FAIL" }, k + 1, v.detail);
        if !v.pass {
            failed.push(k + 1);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria pass", criteria.len());
    } else {
        println!("acceptance: {} of {} criteria fail: {failed:?}", failed.len(), criteria.len());
        std::process::exit(1);
    }
}
