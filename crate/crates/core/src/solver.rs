//! The conjugate gradient driver.
//!
//! Each iteration computes the steepest-descent pair `(v_k, theta_k)`, stops
//! once `theta_k >= -tol_crit`, forms `d_k = v_k + beta_k d_{k-1}`, takes a
//! step with the configured line search and advances. The Jacobian is
//! evaluated once per accepted point (the Wolfe searches hand theirs over) and
//! all cross-iteration `h` values come from cached effective gradients.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::cone::{max_row_dot, ConeOrder};
use crate::directions::{direction_update, DirectionMethod, DirectionState};
use crate::error::{check_len, Error, Result};
use crate::linalg::{norm, norm_sq};
use crate::linesearch::{search, LineSearchKind, LineSearchParams};
use crate::problems::{evaluate_f, evaluate_j, EvalCounters, VectorProblem};
use crate::subproblem::{default_tolerance, is_critical, steepest_direction};

/// `5 sqrt(eps)` with `eps = 2^-52`.
pub const DEFAULT_TOL_CRIT: f64 = 5.0 * 1.490_116_119_384_765_6e-8;
pub const DEFAULT_MAX_ITERS: usize = 5000;
pub const DEFAULT_MU: f64 = 2.4;

#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    pub method: DirectionMethod,
    pub linesearch: LineSearchKind,
    pub mu: f64,
    pub max_iters: usize,
    pub tol_crit: f64,
    pub ls_params: LineSearchParams,
    /// Keep the per-iteration trace. Totals and diagnostics are always kept.
    pub keep_trace: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            method: DirectionMethod::Mprp,
            linesearch: LineSearchKind::Wolfe,
            mu: DEFAULT_MU,
            max_iters: DEFAULT_MAX_ITERS,
            tol_crit: DEFAULT_TOL_CRIT,
            ls_params: LineSearchParams::default(),
            keep_trace: true,
        }
    }
}

impl SolverOptions {
    pub fn new(method: DirectionMethod, linesearch: LineSearchKind) -> Self {
        SolverOptions {
            method,
            linesearch,
            ..SolverOptions::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mu > 2.0) {
            return Err(Error::Config(format!("mu must exceed 2, got {}", self.mu)));
        }
        if self.max_iters == 0 {
            return Err(Error::Config("max_iters must be at least 1".into()));
        }
        if !(self.tol_crit > 0.0) {
            return Err(Error::Config(format!("tol_crit must be positive, got {}", self.tol_crit)));
        }
        self.ls_params.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RunStatus {
    Converged,
    MaxIters,
    LsFail,
    SubproblemFail,
    /// Reserved for degenerate coefficients; the driver currently restarts
    /// with steepest descent instead of stopping.
    DegenerateBeta,
}

impl RunStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            RunStatus::Converged => "CONVERGED",
            RunStatus::MaxIters => "MAX_ITERS",
            RunStatus::LsFail => "LS_FAIL",
            RunStatus::SubproblemFail => "SUBPROBLEM_FAIL",
            RunStatus::DegenerateBeta => "DEGENERATE_BETA",
        }
    }
}

impl fmt::Display for RunStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RunStatus {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            RunStatus::Converged,
            RunStatus::MaxIters,
            RunStatus::LsFail,
            RunStatus::SubproblemFail,
            RunStatus::DegenerateBeta,
        ]
        .into_iter()
        .find(|st| st.as_str() == s)
        .ok_or_else(|| Error::Config(format!("unknown run status `{s}`")))
    }
}

/// One accepted step.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceEntry {
    pub norm_v: f64,
    pub theta: f64,
    /// `h(x_k, v_k)`
    pub h_v: f64,
    pub beta: f64,
    pub alpha: f64,
    /// `h(x_k, d_k)`
    pub h_d: f64,
    pub norm_d: f64,
    /// `phi(F(x_{k+1}) - F(x_k))`; negative for a strict K-decrease.
    pub phi_decrease: f64,
    pub restarted: bool,
    pub f_trials: usize,
    pub j_evals: usize,
    /// Iterate `x_k`.
    pub x: Vec<f64>,
    /// Search direction `d_k`.
    pub d: Vec<f64>,
}

/// Per-run checks that are cheap enough to keep for every run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunDiagnostics {
    pub min_beta: f64,
    /// `max_k h(x_k, d_k) - (1 - 2/mu) h(x_k, v_k)`; nonpositive when every
    /// direction satisfied the sufficient descent condition.
    pub worst_descent_margin: f64,
    /// Largest `phi(F(x_{k+1}) - F(x_k))` over the run.
    pub worst_phi_decrease: f64,
    /// Running sum of `h(x_k, d_k)^2 / |d_k|^2`.
    pub zoutendijk_sum: f64,
    pub last_zoutendijk_increment: f64,
}

impl Default for RunDiagnostics {
    fn default() -> Self {
        RunDiagnostics {
            min_beta: f64::INFINITY,
            worst_descent_margin: f64::NEG_INFINITY,
            worst_phi_decrease: f64::NEG_INFINITY,
            zoutendijk_sum: 0.0,
            last_zoutendijk_increment: 0.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunRecord {
    pub problem: String,
    pub method: DirectionMethod,
    pub linesearch: LineSearchKind,
    pub status: RunStatus,
    /// Failure detail for non-converged runs.
    pub message: Option<String>,
    pub iters: usize,
    pub f_evals: u64,
    pub j_evals: u64,
    pub wall_time: f64,
    pub restarts: usize,
    pub trace: Vec<TraceEntry>,
    pub diagnostics: RunDiagnostics,
    pub x0: Vec<f64>,
    pub x_final: Vec<f64>,
    pub f_final: Vec<f64>,
    pub theta_final: f64,
}

/// Runs the method under the nonnegative orthant order.
pub fn solve<P: VectorProblem + ?Sized>(
    problem: &P,
    x0: &[f64],
    opts: &SolverOptions,
) -> Result<RunRecord> {
    let cone = ConeOrder::nonneg_orthant(problem.m())?;
    solve_in_cone(problem, &cone, x0, opts)
}

pub fn solve_in_cone<P: VectorProblem + ?Sized>(
    problem: &P,
    cone: &ConeOrder,
    x0: &[f64],
    opts: &SolverOptions,
) -> Result<RunRecord> {
    opts.validate()?;
    check_len("cone dimension", problem.m(), cone.dim())?;
    check_len("initial point", problem.n(), x0.len())?;
    let clock = Instant::now();
    let descent_const = 1.0 - 2.0 / opts.mu;

    let mut counters = EvalCounters::default();
    let mut x = x0.to_vec();
    let mut f = evaluate_f(problem, &x, &mut counters)?;
    let mut jac = evaluate_j(problem, &x, &mut counters)?;

    let mut state: Option<DirectionState> = None;
    let mut trace = Vec::new();
    let mut diag = RunDiagnostics::default();
    let mut iters = 0usize;
    let mut restarts = 0usize;
    let mut theta_final = f64::NAN;
    let mut message = None;

    let status = loop {
        let sd = match steepest_direction(&jac, cone, default_tolerance(&jac)) {
            Ok(sd) => sd,
            Err(e) => {
                message = Some(e.to_string());
                break RunStatus::SubproblemFail;
            }
        };
        theta_final = sd.theta;
        if is_critical(sd.theta, opts.tol_crit) {
            break RunStatus::Converged;
        }
        if iters >= opts.max_iters {
            break RunStatus::MaxIters;
        }

        let (mut beta, mut d, mut restarted) = match &state {
            None => (0.0, sd.v.clone(), false),
            Some(prev) => {
                let inputs = prev.beta_inputs(&sd.gradients, &sd.v, sd.h_at_v);
                match opts.method.beta(&inputs, opts.mu) {
                    Ok(b) if b.is_finite() => (b, direction_update(&sd.v, b, Some(&prev.d_prev)), false),
                    Ok(_) | Err(Error::DegenerateDenominator { .. }) => (0.0, sd.v.clone(), true),
                    Err(e) => return Err(e),
                }
            }
        };
        let mut h_d = max_row_dot(&sd.gradients, &d);
        if !(h_d < 0.0) {
            beta = 0.0;
            d = sd.v.clone();
            h_d = sd.h_at_v;
            restarted = true;
        }
        if restarted {
            restarts += 1;
        }

        let before = counters;
        let step = match search(
            opts.linesearch,
            problem,
            cone,
            &x,
            &f,
            &d,
            h_d,
            &opts.ls_params,
            &mut counters,
        ) {
            Ok(step) => step,
            Err(e) => {
                message = Some(e.to_string());
                break RunStatus::LsFail;
            }
        };
        let jac_new = match step.j_new {
            Some(j) => j,
            None => match evaluate_j(problem, &step.x_new, &mut counters) {
                Ok(j) => j,
                Err(e) => {
                    message = Some(e.to_string());
                    break RunStatus::LsFail;
                }
            },
        };

        let diff: Vec<f64> = step.f_new.iter().zip(&f).map(|(a, b)| a - b).collect();
        let phi_decrease = cone.phi(&diff)?;
        let norm_d = norm(&d);
        let increment = h_d * h_d / norm_sq(&d);
        diag.min_beta = diag.min_beta.min(beta);
        diag.worst_descent_margin = diag.worst_descent_margin.max(h_d - descent_const * sd.h_at_v);
        diag.worst_phi_decrease = diag.worst_phi_decrease.max(phi_decrease);
        diag.zoutendijk_sum += increment;
        diag.last_zoutendijk_increment = increment;

        if opts.keep_trace {
            trace.push(TraceEntry {
                norm_v: norm(&sd.v),
                theta: sd.theta,
                h_v: sd.h_at_v,
                beta,
                alpha: step.alpha,
                h_d,
                norm_d,
                phi_decrease,
                restarted,
                f_trials: step.trials,
                j_evals: (counters.j_evals - before.j_evals) as usize,
                x: x.clone(),
                d: d.clone(),
            });
        }

        state = Some(DirectionState {
            d_prev: d,
            gradients_prev: sd.gradients,
            h_prev_vprev: sd.h_at_v,
            h_prev_dprev: h_d,
        });
        x = step.x_new;
        f = step.f_new;
        jac = jac_new;
        iters += 1;
    };

    Ok(RunRecord {
        problem: problem.name().to_string(),
        method: opts.method,
        linesearch: opts.linesearch,
        status,
        message,
        iters,
        f_evals: counters.f_evals,
        j_evals: counters.j_evals,
        wall_time: clock.elapsed().as_secs_f64(),
        restarts,
        trace,
        diagnostics: diag,
        x0: x0.to_vec(),
        x_final: x,
        f_final: f,
        theta_final,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{find_problem, sample_start};

    #[test]
    fn default_tolerance_value() {
        assert_eq!(DEFAULT_TOL_CRIT, 5.0 * f64::EPSILON.sqrt());
        assert!((DEFAULT_TOL_CRIT - 7.45e-8).abs() < 1e-10);
    }

    #[test]
    fn jos1_mprp_wolfe_converges() {
        let p = find_problem("jos1").unwrap();
        let x0 = sample_start(p.as_ref(), 11);
        let r = solve(p.as_ref(), &x0, &SolverOptions::default()).unwrap();
        assert_eq!(r.status, RunStatus::Converged, "{:?}", r.message);
        assert!(r.theta_final >= -DEFAULT_TOL_CRIT);
        assert!(r.iters < 5000);
        for t in &r.trace {
            assert!(t.h_d <= (1.0 - 2.0 / 2.4) * t.h_v + 1e-12);
            assert!(t.beta >= 0.0);
            assert!(t.theta <= 0.0);
        }
    }

    #[test]
    fn pareto_start_stops_immediately() {
        let p = find_problem("jos1").unwrap();
        let r = solve(p.as_ref(), &[0.0; 5], &SolverOptions::default()).unwrap();
        assert_eq!(r.status, RunStatus::Converged);
        assert_eq!(r.iters, 0);
        assert_eq!((r.f_evals, r.j_evals), (1, 1));
        assert!(r.trace.is_empty());
    }

    #[test]
    fn evaluation_accounting() {
        let p = find_problem("mop7").unwrap();
        for ls in LineSearchKind::ALL {
            let x0 = sample_start(p.as_ref(), 3);
            let r = solve(p.as_ref(), &x0, &SolverOptions::new(DirectionMethod::Mprp, ls)).unwrap();
            let trials: usize = r.trace.iter().map(|t| t.f_trials).sum();
            let jevals: usize = r.trace.iter().map(|t| t.j_evals).sum();
            assert_eq!(r.f_evals as usize, trials + 1);
            assert_eq!(r.j_evals as usize, jevals + 1);
            if ls == LineSearchKind::Armijo {
                assert_eq!(r.j_evals as usize, r.iters + 1);
            }
        }
    }

    #[test]
    fn iteration_cap() {
        let p = find_problem("quad_ill").unwrap();
        let x0 = sample_start(p.as_ref(), 5);
        let opts = SolverOptions {
            max_iters: 3,
            ..SolverOptions::default()
        };
        let r = solve(p.as_ref(), &x0, &opts).unwrap();
        assert_eq!(r.status, RunStatus::MaxIters);
        assert_eq!(r.iters, 3);
    }

    #[test]
    fn invalid_options_rejected() {
        let p = find_problem("jos1").unwrap();
        let bad = SolverOptions {
            mu: 2.0,
            ..SolverOptions::default()
        };
        assert!(solve(p.as_ref(), &[0.0; 5], &bad).is_err());
        assert!(solve(p.as_ref(), &[0.0; 4], &SolverOptions::default()).is_err());
    }

    #[test]
    fn status_names_round_trip() {
        for s in ["CONVERGED", "MAX_ITERS", "LS_FAIL", "SUBPROBLEM_FAIL", "DEGENERATE_BETA"] {
            assert_eq!(s.parse::<RunStatus>().unwrap().as_str(), s);
        }
    }
}
