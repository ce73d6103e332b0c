//! Vector objectives `F: R^n -> R^m` with analytic Jacobians, the counted
//! evaluation path used by every solver, and the built-in test suite.

mod suite;

pub use suite::{find_problem, problem_names, suite};

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{check_len, Error, Result};
use crate::linalg::{is_finite, Matrix};

/// A smooth vector-valued objective.
///
/// Implementations must be deterministic: the same `x` always yields the same
/// values and Jacobian.
pub trait VectorProblem {
    fn name(&self) -> &str;
    /// Decision dimension.
    fn n(&self) -> usize;
    /// Objective dimension.
    fn m(&self) -> usize;
    fn eval(&self, x: &[f64]) -> Vec<f64>;
    /// `m x n` Jacobian.
    fn jacobian(&self, x: &[f64]) -> Matrix;
    /// Box `(lower, upper)` used to draw initial points.
    fn start_box(&self) -> (&[f64], &[f64]);
    /// True when every component objective is convex.
    fn convex(&self) -> bool {
        false
    }
}

pub type SharedProblem = Arc<dyn VectorProblem + Send + Sync>;

type ValueFn = dyn Fn(&[f64]) -> Vec<f64> + Send + Sync;
type JacobianFn = dyn Fn(&[f64]) -> Matrix + Send + Sync;

/// A problem assembled from closures.
pub struct FnProblem {
    name: String,
    n: usize,
    m: usize,
    value: Box<ValueFn>,
    jacobian: Box<JacobianFn>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    convex: bool,
}

impl FnProblem {
    pub fn new(
        name: impl Into<String>,
        m: usize,
        lower: Vec<f64>,
        upper: Vec<f64>,
        value: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
        jacobian: impl Fn(&[f64]) -> Matrix + Send + Sync + 'static,
    ) -> Result<Self> {
        check_len("start box upper bound", lower.len(), upper.len())?;
        if lower.is_empty() || m == 0 {
            return Err(Error::Config("problem dimensions must be positive".into()));
        }
        if lower.iter().zip(&upper).any(|(l, u)| !(l < u)) {
            return Err(Error::Config("start box needs lower < upper componentwise".into()));
        }
        Ok(FnProblem {
            name: name.into(),
            n: lower.len(),
            m,
            value: Box::new(value),
            jacobian: Box::new(jacobian),
            lower,
            upper,
            convex: false,
        })
    }

    pub fn with_convex(mut self, convex: bool) -> Self {
        self.convex = convex;
        self
    }
}

impl VectorProblem for FnProblem {
    fn name(&self) -> &str {
        &self.name
    }
    fn n(&self) -> usize {
        self.n
    }
    fn m(&self) -> usize {
        self.m
    }
    fn eval(&self, x: &[f64]) -> Vec<f64> {
        (self.value)(x)
    }
    fn jacobian(&self, x: &[f64]) -> Matrix {
        (self.jacobian)(x)
    }
    fn start_box(&self) -> (&[f64], &[f64]) {
        (&self.lower, &self.upper)
    }
    fn convex(&self) -> bool {
        self.convex
    }
}

/// Per-run evaluation counts. Never shared between concurrent runs.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EvalCounters {
    pub f_evals: u64,
    pub j_evals: u64,
}

/// Counted evaluation of `F(x)`.
pub fn evaluate_f<P: VectorProblem + ?Sized>(
    problem: &P,
    x: &[f64],
    counters: &mut EvalCounters,
) -> Result<Vec<f64>> {
    check_len("evaluation point", problem.n(), x.len())?;
    counters.f_evals += 1;
    let fx = problem.eval(x);
    check_len("objective value", problem.m(), fx.len())?;
    if !is_finite(&fx) {
        return Err(Error::NonFiniteEvaluation {
            what: "objective",
            x: x.to_vec(),
        });
    }
    Ok(fx)
}

/// Counted evaluation of `JF(x)`.
pub fn evaluate_j<P: VectorProblem + ?Sized>(
    problem: &P,
    x: &[f64],
    counters: &mut EvalCounters,
) -> Result<Matrix> {
    check_len("evaluation point", problem.n(), x.len())?;
    counters.j_evals += 1;
    let jac = problem.jacobian(x);
    check_len("Jacobian rows", problem.m(), jac.rows())?;
    check_len("Jacobian columns", problem.n(), jac.cols())?;
    if !jac.is_finite() {
        return Err(Error::NonFiniteEvaluation {
            what: "Jacobian",
            x: x.to_vec(),
        });
    }
    Ok(jac)
}

/// Uniform draw from the problem's start box.
pub fn sample_start<P: VectorProblem + ?Sized>(problem: &P, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lower, upper) = problem.start_box();
    lower
        .iter()
        .zip(upper)
        .map(|(&l, &u)| rng.random_range(l..u))
        .collect()
}

/// Central finite-difference Jacobian with step `1e-6 (1 + |x|)`.
pub fn finite_difference_jacobian<P: VectorProblem + ?Sized>(problem: &P, x: &[f64]) -> Matrix {
    let step = 1e-6 * (1.0 + crate::linalg::norm(x));
    let mut jac = Matrix::zeros(problem.m(), problem.n());
    let mut probe = x.to_vec();
    for k in 0..problem.n() {
        probe[k] = x[k] + step;
        let fwd = problem.eval(&probe);
        probe[k] = x[k] - step;
        let bwd = problem.eval(&probe);
        probe[k] = x[k];
        for i in 0..problem.m() {
            jac.row_mut(i)[k] = (fwd[i] - bwd[i]) / (2.0 * step);
        }
    }
    jac
}
