use srq_core::catalog;
use srq_core::spectral::default_null_tol;
use srq_core::*;

fn ctx(id: usize) -> SphereContext {
    catalog::example(id).unwrap().instance.whiten().unwrap()
}

fn det3(m: [[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn rows3(m: &Matrix) -> [[f64; 3]; 3] {
    let mut out = [[0.0; 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = m[(i, j)];
        }
    }
    out
}

/// Eigenvalues of a symmetric 3x3 matrix from the trigonometric solution of
/// its characteristic cubic, descending.
fn eig3(m: [[f64; 3]; 3]) -> [f64; 3] {
    let p1 = m[0][1] * m[0][1] + m[0][2] * m[0][2] + m[1][2] * m[1][2];
    let q = (m[0][0] + m[1][1] + m[2][2]) / 3.0;
    let p2 = (m[0][0] - q).powi(2) + (m[1][1] - q).powi(2) + (m[2][2] - q).powi(2) + 2.0 * p1;
    let p = (p2 / 6.0).sqrt();
    let mut bm = m;
    for (i, row) in bm.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = (*v - if i == j { q } else { 0.0 }) / p;
        }
    }
    let r = (det3(bm) / 2.0).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    let hi = q + 2.0 * p * phi.cos();
    let lo = q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos();
    [hi, 3.0 * q - hi - lo, lo]
}

/// Roots of `det(B - mu W) = 0` by sign changes on a fine grid and bisection.
fn pencil_roots3(b: [[f64; 3]; 3], w: [[f64; 3]; 3], lo: f64, hi: f64) -> Vec<f64> {
    let f = |mu: f64| {
        let mut m = b;
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] -= mu * w[i][j];
            }
        }
        det3(m)
    };
    let steps = 20_000;
    let mut roots = Vec::new();
    for k in 0..steps {
        let (mut a, mut c) = (lo + (hi - lo) * k as f64 / steps as f64, lo + (hi - lo) * (k + 1) as f64 / steps as f64);
        if f(a).signum() == f(c).signum() {
            continue;
        }
        for _ in 0..100 {
            let m = 0.5 * (a + c);
            if f(a).signum() == f(m).signum() {
                a = m;
            } else {
                c = m;
            }
        }
        roots.push(0.5 * (a + c));
    }
    roots
}

fn round4(x: f64) -> f64 {
    (x * 1e4).round() / 1e4
}

#[test]
fn example1_pencil_matches_cubic_roots() {
    let inst = catalog::example(1).unwrap().instance;
    let roots = pencil_roots3(rows3(inst.b()), rows3(inst.w()), -50.0, 50.0);
    assert_eq!(roots.len(), 3);
    let c = ctx(1);
    assert!((c.mu_lo() - roots[0]).abs() < 1e-9);
    assert!((c.mu_hi() - roots[2]).abs() < 1e-9);
    assert_eq!(round4(c.mu_lo()), 0.9882);
    assert_eq!(round4(c.mu_hi()), 6.7322);
}

#[test]
fn example1_top_of_d_matches_trigonometric_cubic() {
    let inst = catalog::example(1).unwrap().instance;
    let oracle = eig3(rows3(inst.d()))[0];
    let top = sym_eig_extreme(inst.d(), Extreme::Max).unwrap();
    assert!((top.value - oracle).abs() < 1e-12);
    let c = ctx(1);
    let at_lo = evaluate_q(&c, c.mu_lo(), &DualConfig::default()).unwrap();
    assert!((at_lo.q - (c.mu_lo() + oracle)).abs() < 1e-8);
}

#[test]
fn paper_ranges_to_four_decimals() {
    for entry in catalog::all() {
        let c = entry.instance.whiten().unwrap();
        assert_eq!(round4(c.mu_lo()), entry.expected.mu_lo, "example {}", entry.id);
        assert_eq!(round4(c.mu_hi()), entry.expected.mu_hi, "example {}", entry.id);
    }
}

#[test]
fn diagonal_examples_agree_with_oracle() {
    for id in [2, 4, 5] {
        let c = ctx(id);
        let (b, w, d) = (c.b().diag(), c.w().diag(), c.d().diag());
        for k in 0..40 {
            let mu = c.mu_lo() + (c.mu_hi() - c.mu_lo()) * k as f64 / 40.0;
            let eval = evaluate_q(&c, mu, &DualConfig::default()).unwrap();
            let exact = diagonal_oracle(&b, &w, &d, mu).unwrap();
            assert!((eval.nu - exact).abs() <= 1e-6, "example {id} at {mu}: {} vs {exact}", eval.nu);
        }
    }
}

#[test]
fn example2_interval_lines() {
    let c = ctx(2);
    let dual = DualConfig::default();
    let left = evaluate_q(&c, 0.2, &dual).unwrap();
    let right = evaluate_q(&c, 4.4, &dual).unwrap();
    let lines = build_lines(&left, &right, &c, 1e-14).unwrap();
    assert!((lines.q1(0.2) - 5.2).abs() < 1e-8);
    // At mu = 4.4 the constraint is active on a mix of e1 and e2.
    assert!((right.q - (4.4 + 43.0 / 21.2)).abs() < 1e-7);
    assert!((lines.q2(4.4) - 6.4283).abs() < 1e-4);
}

#[test]
fn example2_stops_after_two_iterations() {
    let report = solve(&ctx(2), &SolverConfig::new(1e-5)).unwrap();
    assert_eq!(report.iterations, 2);
    assert!((report.mu_star - 4.5).abs() < 1e-3);
    assert!((report.q_star - 6.5).abs() < 1e-4);
}

#[test]
fn example2_right_endpoint_recovers_e2() {
    let c = ctx(2);
    let rec = recover_at_mu_hi(&c).unwrap();
    assert!((rec.x[1].abs() - 1.0).abs() < 1e-12);
    assert!((rec.f - 6.5).abs() < 1e-12);
    let mut config = SolverConfig::new(1e-5);
    config.eval_right_endpoint = true;
    let report = solve(&c, &config).unwrap();
    assert!((report.q_star - 6.5).abs() < 1e-12);
}

#[test]
fn example4_nullspace_at_top_of_pencil() {
    let c = ctx(4);
    let pencil = c.pencil(c.mu_hi());
    let pair = nullspace_max_quadratic(&pencil, c.d(), default_null_tol(&pencil)).unwrap();
    assert!(pair.value.abs() < 1e-12);
    assert!((pair.vector[6].abs() - 1.0).abs() < 1e-12);
    let rec = recover_at_mu_hi(&c).unwrap();
    assert!((rec.f - 10.0 / 3.0).abs() < 1e-12);
}

#[test]
fn example4_optimum_is_the_lower_end() {
    let c = ctx(4);
    let report = solve(&c, &SolverConfig::new(1e-5)).unwrap();
    assert!((report.mu_star + 1.0).abs() < 1e-3);
    let eval = report.incumbent.as_ref().unwrap();
    assert!(eval.eta < 1e-9);
    let rec = recover_solution(&c, eval).unwrap();
    assert!((rec.x[8].abs() - 1.0).abs() < 1e-9);
    assert!((rec.f - 31.0).abs() < 1e-9);
}

#[test]
fn bnb_matches_reference_optima() {
    for entry in catalog::all() {
        let c = entry.instance.whiten().unwrap();
        let config = SolverConfig::new(1e-5);
        let report = solve(&c, &config).unwrap();
        assert_eq!(report.status, Status::Optimal);
        assert!((report.mu_star - entry.expected.bnb_mu_star).abs() <= 1e-3, "example {}", entry.id);
        assert!(report.gap.unwrap() <= config.eps + 2.0 * config.dual.tau_dual);
        assert!(report.iterations <= report.iteration_bound.unwrap());
    }
}

#[test]
fn two_stage_matches_reference_counts_and_stays_below_bnb() {
    for entry in catalog::all() {
        let c = entry.instance.whiten().unwrap();
        let heuristic = two_stage_solve(&c, &HeuristicConfig::new(0.05)).unwrap();
        assert_eq!(heuristic.stage1_evals, Some(entry.expected.stage1_evals), "example {}", entry.id);
        let exact = solve(&c, &SolverConfig::new(1e-5)).unwrap();
        assert!(heuristic.q_star <= exact.ub.unwrap() + 1e-6);
        assert!((heuristic.q_star - exact.q_star).abs() <= 1e-3, "example {}", entry.id);
    }
}
