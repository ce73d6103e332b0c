//! Python bindings for `vecopt`.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use vecopt::bench::{performance_profile as profile_of, ProfileTable};
use vecopt::directions::{BetaInputs, DirectionMethod};
use vecopt::linesearch::LineSearchKind;
use vecopt::problems::{find_problem, problem_names as names, sample_start, FnProblem, SharedProblem};
use vecopt::subproblem::steepest_direction as steepest;
use vecopt::{Matrix, RunRecord, SolverOptions};

fn err(e: vecopt::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn matrix(rows: Vec<Vec<f64>>) -> PyResult<Matrix> {
    Matrix::from_rows(&rows).map_err(err)
}

/// Order induced by a closed convex pointed cone with finitely many dual
/// generators.
#[pyclass(name = "ConeOrder", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyCone(vecopt::ConeOrder);

#[pymethods]
impl PyCone {
    /// Componentwise order on R^m.
    #[staticmethod]
    fn orthant(m: usize) -> PyResult<Self> {
        vecopt::ConeOrder::nonneg_orthant(m).map(PyCone).map_err(err)
    }

    /// Cone whose dual is generated by `generators` (normalized to unit length).
    #[staticmethod]
    fn polyhedral(generators: Vec<Vec<f64>>) -> PyResult<Self> {
        vecopt::ConeOrder::polyhedral(generators).map(PyCone).map_err(err)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn generators(&self) -> Vec<Vec<f64>> {
        self.0.generators().to_rows()
    }

    #[getter]
    fn e(&self) -> Vec<f64> {
        self.0.e().to_vec()
    }

    fn phi(&self, y: Vec<f64>) -> PyResult<f64> {
        self.0.phi(&y).map_err(err)
    }

    /// `phi(J d)`.
    fn h(&self, jacobian: Vec<Vec<f64>>, d: Vec<f64>) -> PyResult<f64> {
        self.0.h(&matrix(jacobian)?, &d).map_err(err)
    }

    /// True when `u` precedes `v` in the cone order.
    fn leq(&self, u: Vec<f64>, v: Vec<f64>) -> PyResult<bool> {
        self.0.cone_leq(&u, &v).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!(
            "ConeOrder(dim={}, generators={})",
            self.0.dim(),
            self.0.num_generators()
        )
    }
}

fn cone_or_orthant(cone: Option<&PyCone>, m: usize) -> PyResult<vecopt::ConeOrder> {
    match cone {
        Some(c) => Ok(c.0.clone()),
        None => vecopt::ConeOrder::nonneg_orthant(m).map_err(err),
    }
}

/// Steepest descent direction at a point with Jacobian `jacobian`.
#[pyclass(name = "SteepestDirection", frozen, get_all)]
struct PySteepest {
    v: Vec<f64>,
    theta: f64,
    h_at_v: f64,
    #[pyo3(name = "lambda_")]
    lambda: Vec<f64>,
    gap: f64,
}

#[pyfunction]
#[pyo3(signature = (jacobian, cone=None, tol=None))]
fn steepest_direction(jacobian: Vec<Vec<f64>>, cone: Option<&PyCone>, tol: Option<f64>) -> PyResult<PySteepest> {
    let j = matrix(jacobian)?;
    let cone = cone_or_orthant(cone, j.rows())?;
    let tol = tol.unwrap_or_else(|| vecopt::subproblem::default_tolerance(&j));
    let r = steepest(&j, &cone, tol).map_err(err)?;
    Ok(PySteepest {
        v: r.v,
        theta: r.theta,
        h_at_v: r.h_at_v,
        lambda: r.lambda,
        gap: r.gap,
    })
}

/// Conjugate gradient coefficient of `method` from the five cross h-values.
#[pyfunction]
#[pyo3(signature = (method, h_k_vk, h_km1_vk, h_k_dkm1, h_km1_vkm1, h_km1_dkm1, mu=vecopt::solver::DEFAULT_MU))]
fn beta(
    method: &str,
    h_k_vk: f64,
    h_km1_vk: f64,
    h_k_dkm1: f64,
    h_km1_vkm1: f64,
    h_km1_dkm1: f64,
    mu: f64,
) -> PyResult<f64> {
    let method: DirectionMethod = method.parse().map_err(err)?;
    let inputs = BetaInputs {
        h_k_vk,
        h_km1_vk,
        h_k_dkm1,
        h_km1_vkm1,
        h_km1_dkm1,
    };
    method.beta(&inputs, mu).map_err(err)
}

#[pyfunction]
fn problem_names() -> Vec<String> {
    names()
}

#[pyfunction]
fn method_ids() -> Vec<&'static str> {
    DirectionMethod::ALL.iter().map(|m| m.id()).collect()
}

#[pyfunction]
fn linesearch_ids() -> Vec<&'static str> {
    LineSearchKind::ALL.iter().map(|l| l.id()).collect()
}

/// A built-in test problem.
#[pyclass(name = "Problem", frozen)]
struct PyProblem(SharedProblem);

impl PyProblem {
    fn check(&self, x: &[f64]) -> PyResult<()> {
        if x.len() == self.0.n() {
            Ok(())
        } else {
            Err(PyValueError::new_err(format!(
                "{} expects {} variables, got {}",
                self.0.name(),
                self.0.n(),
                x.len()
            )))
        }
    }
}

#[pymethods]
impl PyProblem {
    #[new]
    fn new(name: &str) -> PyResult<Self> {
        find_problem(name).map(PyProblem).map_err(err)
    }

    #[getter]
    fn name(&self) -> String {
        self.0.name().to_string()
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn m(&self) -> usize {
        self.0.m()
    }

    #[getter]
    fn convex(&self) -> bool {
        self.0.convex()
    }

    fn eval(&self, x: Vec<f64>) -> PyResult<Vec<f64>> {
        self.check(&x)?;
        Ok(self.0.eval(&x))
    }

    fn jacobian(&self, x: Vec<f64>) -> PyResult<Vec<Vec<f64>>> {
        self.check(&x)?;
        Ok(self.0.jacobian(&x).to_rows())
    }

    /// Seeded random point from the problem's start box.
    fn sample_start(&self, seed: u64) -> Vec<f64> {
        sample_start(self.0.as_ref(), seed)
    }
}

#[pyclass(name = "TraceStep", frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
struct PyTraceStep {
    norm_v: f64,
    theta: f64,
    h_v: f64,
    beta: f64,
    alpha: f64,
    h_d: f64,
    phi_decrease: f64,
    restarted: bool,
}

/// Outcome of one solver run.
#[pyclass(name = "RunResult", frozen, get_all)]
struct PyRun {
    problem: String,
    method: String,
    linesearch: String,
    status: String,
    message: Option<String>,
    iters: usize,
    f_evals: u64,
    j_evals: u64,
    restarts: usize,
    wall_time: f64,
    theta_final: f64,
    x0: Vec<f64>,
    x_final: Vec<f64>,
    f_final: Vec<f64>,
    trace: Vec<PyTraceStep>,
}

#[pymethods]
impl PyRun {
    #[getter]
    fn converged(&self) -> bool {
        self.status == "CONVERGED"
    }

    fn __repr__(&self) -> String {
        format!(
            "RunResult({} {}/{} status={} iters={} theta={:e})",
            self.problem, self.method, self.linesearch, self.status, self.iters, self.theta_final
        )
    }
}

impl From<RunRecord> for PyRun {
    fn from(r: RunRecord) -> Self {
        PyRun {
            problem: r.problem,
            method: r.method.id().to_string(),
            linesearch: r.linesearch.id().to_string(),
            status: r.status.as_str().to_string(),
            message: r.message,
            iters: r.iters,
            f_evals: r.f_evals,
            j_evals: r.j_evals,
            restarts: r.restarts,
            wall_time: r.wall_time,
            theta_final: r.theta_final,
            x0: r.x0,
            x_final: r.x_final,
            f_final: r.f_final,
            trace: r
                .trace
                .into_iter()
                .map(|t| PyTraceStep {
                    norm_v: t.norm_v,
                    theta: t.theta,
                    h_v: t.h_v,
                    beta: t.beta,
                    alpha: t.alpha,
                    h_d: t.h_d,
                    phi_decrease: t.phi_decrease,
                    restarted: t.restarted,
                })
                .collect(),
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn options(
    method: &str,
    linesearch: &str,
    mu: Option<f64>,
    max_iters: Option<usize>,
    tol: Option<f64>,
    rho: Option<f64>,
    sigma: Option<f64>,
    delta: Option<f64>,
    trace: bool,
) -> PyResult<SolverOptions> {
    let mut opts = SolverOptions::new(method.parse().map_err(err)?, linesearch.parse().map_err(err)?);
    opts.mu = mu.unwrap_or(opts.mu);
    opts.max_iters = max_iters.unwrap_or(opts.max_iters);
    opts.tol_crit = tol.unwrap_or(opts.tol_crit);
    opts.ls_params.rho = rho.unwrap_or(opts.ls_params.rho);
    opts.ls_params.sigma = sigma.unwrap_or(opts.ls_params.sigma);
    opts.ls_params.delta = delta.unwrap_or(opts.ls_params.delta);
    opts.keep_trace = trace;
    opts.validate().map_err(err)?;
    Ok(opts)
}

/// Runs the solver on a built-in problem from `x0`, or from a seeded random
/// start when `x0` is omitted.
#[pyfunction]
#[pyo3(signature = (
    problem, x0=None, seed=0, method="mprp", linesearch="wolfe", cone=None,
    mu=None, max_iters=None, tol=None, rho=None, sigma=None, delta=None, trace=false
))]
#[allow(clippy::too_many_arguments)]
fn solve(
    py: Python<'_>,
    problem: &str,
    x0: Option<Vec<f64>>,
    seed: u64,
    method: &str,
    linesearch: &str,
    cone: Option<&PyCone>,
    mu: Option<f64>,
    max_iters: Option<usize>,
    tol: Option<f64>,
    rho: Option<f64>,
    sigma: Option<f64>,
    delta: Option<f64>,
    trace: bool,
) -> PyResult<PyRun> {
    let p = find_problem(problem).map_err(err)?;
    let opts = options(method, linesearch, mu, max_iters, tol, rho, sigma, delta, trace)?;
    let cone = cone_or_orthant(cone, p.m())?;
    let x0 = x0.unwrap_or_else(|| sample_start(p.as_ref(), seed));
    let record = py
        .detach(|| vecopt::solve_in_cone(p.as_ref(), &cone, &x0, &opts))
        .map_err(err)?;
    Ok(record.into())
}

/// Runs the solver on `value(x) -> list[float]` with Jacobian
/// `jacobian(x) -> list[list[float]]` (m rows).
#[pyfunction]
#[pyo3(signature = (
    value, jacobian, x0, m, method="mprp", linesearch="wolfe", cone=None,
    mu=None, max_iters=None, tol=None, rho=None, sigma=None, delta=None, trace=false
))]
#[allow(clippy::too_many_arguments)]
fn solve_function(
    value: Py<PyAny>,
    jacobian: Py<PyAny>,
    x0: Vec<f64>,
    m: usize,
    method: &str,
    linesearch: &str,
    cone: Option<&PyCone>,
    mu: Option<f64>,
    max_iters: Option<usize>,
    tol: Option<f64>,
    rho: Option<f64>,
    sigma: Option<f64>,
    delta: Option<f64>,
    trace: bool,
) -> PyResult<PyRun> {
    let opts = options(method, linesearch, mu, max_iters, tol, rho, sigma, delta, trace)?;
    let cone = cone_or_orthant(cone, m)?;
    // first callback failure; reported instead of the solver's error
    let failure: Arc<Mutex<Option<PyErr>>> = Arc::default();
    let n = x0.len();

    let (f_fail, j_fail) = (failure.clone(), failure.clone());
    let value_fn = move |x: &[f64]| -> Vec<f64> {
        Python::attach(|py| {
            value
                .call1(py, (x.to_vec(),))
                .and_then(|o| o.bind(py).extract::<Vec<f64>>())
                .unwrap_or_else(|e| {
                    f_fail.lock().unwrap().get_or_insert(e);
                    vec![f64::NAN; m]
                })
        })
    };
    let jacobian_fn = move |x: &[f64]| -> Matrix {
        Python::attach(|py| {
            jacobian
                .call1(py, (x.to_vec(),))
                .and_then(|o| o.bind(py).extract::<Vec<Vec<f64>>>())
                .and_then(matrix)
                .unwrap_or_else(|e| {
                    j_fail.lock().unwrap().get_or_insert(e);
                    Matrix::from_row_major(m, n, vec![f64::NAN; m * n]).expect("shape")
                })
        })
    };
    let lower: Vec<f64> = x0.iter().map(|v| v - 1.0).collect();
    let upper: Vec<f64> = x0.iter().map(|v| v + 1.0).collect();
    let problem = FnProblem::new("python", m, lower, upper, value_fn, jacobian_fn).map_err(err)?;
    let result = vecopt::solve_in_cone(&problem, &cone, &x0, &opts);
    if let Some(e) = failure.lock().unwrap().take() {
        return Err(e);
    }
    Ok(result.map_err(err)?.into())
}

/// Performance profiles of a cost table `t[p][s]` (`None` marks a failure).
/// Returns `{solver: [(tau, rho), ...]}` with breakpoints starting at tau = 1.
#[pyfunction]
#[pyo3(signature = (table, solver_names=None))]
fn performance_profile(
    table: Vec<Vec<Option<f64>>>,
    solver_names: Option<Vec<String>>,
) -> PyResult<BTreeMap<String, Vec<(f64, f64)>>> {
    let width = table.first().map_or(0, Vec::len);
    let solvers = solver_names.unwrap_or_else(|| (0..width).map(|s| format!("s{s}")).collect());
    let ids = (0..table.len()).map(|p| format!("p{p}")).collect();
    let t = ProfileTable::new(solvers, ids, table).map_err(err)?;
    let set = profile_of(&t).map_err(err)?;
    Ok(set
        .profiles
        .into_iter()
        .map(|p| (p.solver, p.breakpoints))
        .collect())
}

#[pymodule]
fn vecopt_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCone>()?;
    m.add_class::<PySteepest>()?;
    m.add_class::<PyProblem>()?;
    m.add_class::<PyRun>()?;
    m.add_class::<PyTraceStep>()?;
    m.add_function(wrap_pyfunction!(steepest_direction, m)?)?;
    m.add_function(wrap_pyfunction!(beta, m)?)?;
    m.add_function(wrap_pyfunction!(problem_names, m)?)?;
    m.add_function(wrap_pyfunction!(method_ids, m)?)?;
    m.add_function(wrap_pyfunction!(linesearch_ids, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(solve_function, m)?)?;
    m.add_function(wrap_pyfunction!(performance_profile, m)?)?;
    Ok(())
}
