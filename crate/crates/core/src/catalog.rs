//! The five standard test instances with their reference results.

use alloc::vec::Vec;

use crate::instance::SrqInstance;
use crate::matrix::Matrix;

/// Reference values published for an instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Expected {
    pub mu_lo: f64,
    pub mu_hi: f64,
    pub bnb_mu_star: f64,
    pub bnb_iterations: usize,
    pub two_stage_mu_star: Option<f64>,
    /// Grid evaluations with `delta = 0.05`.
    pub stage1_evals: usize,
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub id: usize,
    pub instance: SrqInstance,
    pub expected: Expected,
}

fn sphere(b: Matrix, w: Matrix, d: Matrix) -> SrqInstance {
    SrqInstance::with_identity_v(b, w, d).expect("catalog instances are valid")
}

fn example1() -> SrqInstance {
    sphere(
        Matrix::from_rows([[2.3969, 0.4651, 4.6392], [0.4651, 5.4401, 0.7838], [4.6392, 0.7838, 10.1741]]),
        Matrix::from_rows([[0.8077, 0.8163, 1.0970], [0.8163, 4.1942, 0.8457], [1.0970, 0.8457, 1.8810]]),
        Matrix::from_rows([[3.9104, -0.9011, -2.0128], [-0.9011, 0.9636, 0.6102], [-2.0128, 0.6102, 1.0908]]),
    )
}

fn example2() -> SrqInstance {
    sphere(
        Matrix::from_diag(&[1.0, 9.0, 2.0]),
        Matrix::from_diag(&[5.0, 2.0, 3.0]),
        Matrix::from_diag(&[5.0, 2.0, 3.0]),
    )
}

fn example3() -> SrqInstance {
    sphere(
        Matrix::from_rows([[1.0, 2.0, 3.0, 1.0], [2.0, 5.0, 4.0, -1.0], [3.0, 4.0, 0.0, 1.0], [1.0, -1.0, 1.0, 6.0]]),
        Matrix::from_diag(&[2.0, 1.0, 5.0, 10.0]),
        Matrix::from_rows([[5.0, -1.0, 0.0, 3.0], [-1.0, 9.0, 1.0, 0.0], [0.0, 1.0, -2.0, 0.0], [3.0, 0.0, 0.0, 8.0]]),
    )
}

fn example4() -> SrqInstance {
    sphere(
        Matrix::from_diag(&[1.0, 2.0, 8.0, 7.0, 9.0, 3.0, 10.0, 2.0, -1.0, 6.0]),
        Matrix::from_diag(&[9.0, 8.0, 7.0, 6.0, 5.0, 4.0, 3.0, 2.0, 1.0, 10.0]),
        Matrix::from_diag(&[5.0, 20.0, 3.0, 4.0, 8.0, -1.0, 0.0, 6.0, 32.0, 10.0]),
    )
}

fn example5() -> SrqInstance {
    sphere(
        Matrix::from_diag(&[
            1.0, 2.0, 20.0, 3.0, 50.0, 4.0, 6.0, 7.0, 8.0, 9.0, 100.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 0.0, 10.0, 9.0,
        ]),
        Matrix::from_diag(&[
            100.0, 1.0, 2.0, 30.0, 5.0, 7.0, 9.0, 7.0, 8.0, 9.0, 1.0, 2.0, 30.0, 1.0, 50.0, 8.0, 1.0, 10.0, 10.0, 9.0,
        ]),
        Matrix::from_diag(&[
            0.0, 1000.0, 20.0, 2.0, 5.0, 6.0, 7.0, 9.0, 50.0, 3.0, 4.0, 5.0, 100.0, 5.0, 2.0, 200.0, 4.0, 5.0, 9.0,
            21.0,
        ]),
    )
}

/// Instance `id` in `1..=5`.
pub fn example(id: usize) -> Option<CatalogEntry> {
    let (instance, expected) = match id {
        1 => (
            example1(),
            Expected {
                mu_lo: 0.9882,
                mu_hi: 6.7322,
                bnb_mu_star: 6.5952,
                bnb_iterations: 141,
                two_stage_mu_star: Some(6.5952),
                stage1_evals: 116,
            },
        ),
        2 => (
            example2(),
            Expected {
                mu_lo: 0.2,
                mu_hi: 4.5,
                bnb_mu_star: 4.5,
                bnb_iterations: 2,
                two_stage_mu_star: Some(4.5),
                stage1_evals: 87,
            },
        ),
        3 => (
            example3(),
            Expected {
                mu_lo: -0.8241,
                mu_hi: 6.0647,
                bnb_mu_star: 5.8821,
                bnb_iterations: 35,
                two_stage_mu_star: Some(5.8748),
                stage1_evals: 139,
            },
        ),
        4 => (
            example4(),
            Expected {
                mu_lo: -1.0,
                mu_hi: 3.3333,
                bnb_mu_star: -1.0,
                bnb_iterations: 18,
                two_stage_mu_star: None,
                stage1_evals: 88,
            },
        ),
        5 => (
            example5(),
            Expected {
                mu_lo: 0.0,
                mu_hi: 100.0,
                bnb_mu_star: 1.9999,
                bnb_iterations: 22,
                two_stage_mu_star: Some(2.0029),
                stage1_evals: 2001,
            },
        ),
        _ => return None,
    };
    Some(CatalogEntry { id, instance, expected })
}

pub fn all() -> Vec<CatalogEntry> {
    (1..=5).filter_map(example).collect()
}
