//! Conjugate gradient methods for vector optimization.
//!
//! Objectives `F: R^n -> R^m` are ordered by a cone `K` described through a
//! finite generator set of its dual. The crate provides the steepest-descent
//! subproblem, a nonnegative modified Polak-Ribiere-Polyak coefficient with
//! guaranteed sufficient descent, the classical comparison coefficients,
//! Armijo and (strong) Wolfe searches, a driver, and a benchmark harness with
//! performance profiles.
//!
//! ```
//! use vecopt::problems::{find_problem, sample_start};
//! use vecopt::solver::{solve, RunStatus, SolverOptions};
//!
//! let problem = find_problem("jos1").unwrap();
//! let x0 = sample_start(problem.as_ref(), 42);
//! let run = solve(problem.as_ref(), &x0, &SolverOptions::default()).unwrap();
//! assert_eq!(run.status, RunStatus::Converged);
//! ```

pub mod bench;
pub mod cli;
pub mod cone;
pub mod directions;
pub mod error;
pub mod linalg;
pub mod linesearch;
pub mod problems;
pub mod solver;
pub mod subproblem;

pub use cone::ConeOrder;
pub use directions::DirectionMethod;
pub use error::{Error, Result};
pub use linalg::Matrix;
pub use linesearch::{LineSearchKind, LineSearchParams};
pub use problems::{EvalCounters, VectorProblem};
pub use solver::{solve, solve_in_cone, RunRecord, RunStatus, SolverOptions};
