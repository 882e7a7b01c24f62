//! Global maximization of the sum of two generalized Rayleigh quotients
//!
//! ```text
//! max_{x != 0}  x'Bx / x'Wx + x'Dx / x'Vx,     W, V positive definite
//! ```
//!
//! through the one-dimensional value function `q(mu) = mu + g(mu)` on the
//! pencil interval `[mu_lo, mu_hi]`. Each `q(mu)` is computed from its
//! Lagrangian dual, a convex minimization of a largest eigenvalue, and the
//! dual multipliers at interval endpoints give piecewise-linear
//! ("saw-tooth") overestimators that drive a branch-and-bound search with an
//! `eps` optimality certificate. A grid-plus-parabolic-fit heuristic is
//! included as a baseline.
//!
//! The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(test), no_std)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod bnb;
pub mod bounds;
pub mod catalog;
pub mod dual;
pub mod error;
pub mod heuristic;
pub mod instance;
pub mod matrix;
pub mod recovery;
pub mod report;
pub mod spectral;

pub use bnb::{certified_gap, solve, ChildBound, SolverConfig, TraceRecord};
pub use bounds::{build_lines, interval_upper_bound, slope_one_bound, BoundLines, IntervalBound};
pub use dual::{diagonal_oracle, evaluate_q, phi, q_at_mu_hi, DualConfig, DualEval};
pub use error::{Result, SrqError};
pub use heuristic::{quadratic_fit_search, stage1_scan, two_stage_solve, GridScan, HeuristicConfig};
pub use instance::{generate_random, GeneratorSpec, SphereContext, SrqInstance};
pub use matrix::Matrix;
pub use recovery::{recover_at_mu_hi, recover_solution, Recovered};
pub use report::{SolveReport, Status};
pub use spectral::{nullspace_max_quadratic, pencil_extremes, sym_eig_extreme, EigPair, Extreme};
