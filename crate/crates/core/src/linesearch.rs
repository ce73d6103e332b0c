//! Cone-valued stepsize rules along a K-descent direction `d` with
//! `h0 = h(x, d) < 0`:
//!
//! - Armijo: `F(x + a d) <=_K F(x) + rho a h0 e`, trying `a = tau, delta tau, ...`
//!   with `tau = -h0 / |d|^2`. Never touches the Jacobian.
//! - standard Wolfe: the Armijo inequality plus `h(x + a d, d) >= sigma h0`.
//! - strong Wolfe: the Armijo inequality plus `|h(x + a d, d)| <= sigma |h0|`.
//!
//! The Wolfe searches double the trial step from 1 until the bracket closes and
//! then bisect.

use std::fmt;
use std::str::FromStr;

use crate::cone::ConeOrder;
use crate::error::{Error, Result};
use crate::linalg::{norm_sq, Matrix};
use crate::problems::{evaluate_f, evaluate_j, EvalCounters, VectorProblem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LineSearchKind {
    Armijo,
    Wolfe,
    StrongWolfe,
}

impl LineSearchKind {
    pub const ALL: [LineSearchKind; 3] = [
        LineSearchKind::Armijo,
        LineSearchKind::Wolfe,
        LineSearchKind::StrongWolfe,
    ];

    pub fn id(self) -> &'static str {
        match self {
            LineSearchKind::Armijo => "armijo",
            LineSearchKind::Wolfe => "wolfe",
            LineSearchKind::StrongWolfe => "strong-wolfe",
        }
    }
}

impl fmt::Display for LineSearchKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for LineSearchKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        LineSearchKind::ALL
            .into_iter()
            .find(|k| k.id() == key)
            .ok_or_else(|| Error::Config(format!("unknown line search `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineSearchParams {
    /// Sufficient-decrease constant.
    pub rho: f64,
    /// Curvature constant (Wolfe family only).
    pub sigma: f64,
    /// Armijo backtracking factor.
    pub delta: f64,
    pub alpha_max: f64,
    pub max_trials: usize,
}

impl Default for LineSearchParams {
    fn default() -> Self {
        LineSearchParams {
            rho: 1e-4,
            sigma: 0.1,
            delta: 0.5,
            alpha_max: 1e6,
            max_trials: 100,
        }
    }
}

impl LineSearchParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if !(0.0 < self.rho && self.rho < self.sigma && self.sigma < 1.0) {
            return bad(format!(
                "need 0 < rho < sigma < 1, got rho = {}, sigma = {}",
                self.rho, self.sigma
            ));
        }
        if !(0.0 < self.delta && self.delta < 1.0) {
            return bad(format!("need 0 < delta < 1, got {}", self.delta));
        }
        if !(self.alpha_max > 0.0) {
            return bad(format!("alpha_max must be positive, got {}", self.alpha_max));
        }
        if self.max_trials == 0 {
            return bad("max_trials must be at least 1".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct StepResult {
    pub alpha: f64,
    pub x_new: Vec<f64>,
    pub f_new: Vec<f64>,
    /// Jacobian at the accepted point when the search evaluated it (Wolfe family).
    pub j_new: Option<Matrix>,
    /// `h(x + alpha d, d)` when `j_new` is present.
    pub h_new_d: Option<f64>,
    /// Objective evaluations consumed.
    pub trials: usize,
}

fn shifted(x: &[f64], alpha: f64, d: &[f64]) -> Vec<f64> {
    x.iter().zip(d).map(|(xi, di)| xi + alpha * di).collect()
}

fn sufficient_decrease(
    cone: &ConeOrder,
    f_x: &[f64],
    f_new: &[f64],
    h_xd: f64,
    alpha: f64,
    rho: f64,
) -> bool {
    let bound: Vec<f64> = f_x
        .iter()
        .zip(cone.e())
        .map(|(fi, ei)| fi + rho * alpha * h_xd * ei)
        .collect();
    cone.cone_leq(f_new, &bound).unwrap_or(false)
}

fn check_descent(h_xd: f64, d: &[f64]) -> Result<()> {
    if !(h_xd < 0.0) {
        return Err(Error::LineSearch(format!("direction is not K-descent (h = {h_xd:e})")));
    }
    if norm_sq(d) == 0.0 {
        return Err(Error::LineSearch("zero search direction".into()));
    }
    Ok(())
}

/// `Ok(None)` stands for a trial point where the objective is not finite.
fn try_eval<P: VectorProblem + ?Sized>(
    problem: &P,
    x: &[f64],
    counters: &mut EvalCounters,
) -> Result<Option<Vec<f64>>> {
    match evaluate_f(problem, x, counters) {
        Ok(f) => Ok(Some(f)),
        Err(Error::NonFiniteEvaluation { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

#[allow(clippy::too_many_arguments)]
pub fn armijo<P: VectorProblem + ?Sized>(
    problem: &P,
    cone: &ConeOrder,
    x: &[f64],
    f_x: &[f64],
    d: &[f64],
    h_xd: f64,
    params: &LineSearchParams,
    counters: &mut EvalCounters,
) -> Result<StepResult> {
    check_descent(h_xd, d)?;
    let mut alpha = -h_xd / norm_sq(d);
    for trial in 1..=params.max_trials {
        let x_new = shifted(x, alpha, d);
        if x_new == x {
            return Err(Error::LineSearch(format!("Armijo step underflowed at alpha = {alpha:e}")));
        }
        if let Some(f_new) = try_eval(problem, &x_new, counters)? {
            if sufficient_decrease(cone, f_x, &f_new, h_xd, alpha, params.rho) {
                return Ok(StepResult {
                    alpha,
                    x_new,
                    f_new,
                    j_new: None,
                    h_new_d: None,
                    trials: trial,
                });
            }
        }
        alpha *= params.delta;
    }
    Err(Error::LineSearch(format!(
        "Armijo search exhausted {} trials",
        params.max_trials
    )))
}

#[allow(clippy::too_many_arguments)]
pub fn wolfe_standard<P: VectorProblem + ?Sized>(
    problem: &P,
    cone: &ConeOrder,
    x: &[f64],
    f_x: &[f64],
    d: &[f64],
    h_xd: f64,
    params: &LineSearchParams,
    counters: &mut EvalCounters,
) -> Result<StepResult> {
    bracket_and_bisect(problem, cone, x, f_x, d, h_xd, params, counters, false)
}

#[allow(clippy::too_many_arguments)]
pub fn wolfe_strong<P: VectorProblem + ?Sized>(
    problem: &P,
    cone: &ConeOrder,
    x: &[f64],
    f_x: &[f64],
    d: &[f64],
    h_xd: f64,
    params: &LineSearchParams,
    counters: &mut EvalCounters,
) -> Result<StepResult> {
    bracket_and_bisect(problem, cone, x, f_x, d, h_xd, params, counters, true)
}

#[allow(clippy::too_many_arguments)]
fn bracket_and_bisect<P: VectorProblem + ?Sized>(
    problem: &P,
    cone: &ConeOrder,
    x: &[f64],
    f_x: &[f64],
    d: &[f64],
    h_xd: f64,
    params: &LineSearchParams,
    counters: &mut EvalCounters,
    strong: bool,
) -> Result<StepResult> {
    check_descent(h_xd, d)?;
    let curvature_bound = params.sigma * h_xd;
    let mut lo = 0.0f64;
    let mut hi = f64::INFINITY;
    let mut alpha = 1.0f64.min(params.alpha_max);

    for trial in 1..=params.max_trials {
        let x_new = shifted(x, alpha, d);
        match try_eval(problem, &x_new, counters)? {
            Some(f_new) if sufficient_decrease(cone, f_x, &f_new, h_xd, alpha, params.rho) => {
                let j_new = evaluate_j(problem, &x_new, counters)?;
                let h_new = cone.h(&j_new, d)?;
                let accepted = if strong {
                    h_new.abs() <= -curvature_bound
                } else {
                    h_new >= curvature_bound
                };
                if accepted {
                    return Ok(StepResult {
                        alpha,
                        x_new,
                        f_new,
                        j_new: Some(j_new),
                        h_new_d: Some(h_new),
                        trials: trial,
                    });
                }
                if strong && h_new > 0.0 {
                    hi = alpha;
                } else {
                    lo = alpha;
                }
            }
            _ => hi = alpha,
        }

        if hi.is_finite() {
            if hi - lo <= f64::EPSILON * hi {
                return Err(Error::LineSearch(format!(
                    "Wolfe bracket collapsed at alpha = {hi:e}"
                )));
            }
            alpha = 0.5 * (lo + hi);
        } else if alpha >= params.alpha_max {
            return Err(Error::LineSearch(format!(
                "sufficient decrease holds up to alpha_max = {:e} but curvature never does; \
                 objective looks unbounded below along d",
                params.alpha_max
            )));
        } else {
            alpha = (2.0 * alpha).min(params.alpha_max);
        }
    }
    Err(Error::LineSearch(format!(
        "Wolfe search exhausted {} trials (bracket [{lo:e}, {hi:e}])",
        params.max_trials
    )))
}

/// Dispatch on the search kind.
#[allow(clippy::too_many_arguments)]
pub fn search<P: VectorProblem + ?Sized>(
    kind: LineSearchKind,
    problem: &P,
    cone: &ConeOrder,
    x: &[f64],
    f_x: &[f64],
    d: &[f64],
    h_xd: f64,
    params: &LineSearchParams,
    counters: &mut EvalCounters,
) -> Result<StepResult> {
    match kind {
        LineSearchKind::Armijo => armijo(problem, cone, x, f_x, d, h_xd, params, counters),
        LineSearchKind::Wolfe => wolfe_standard(problem, cone, x, f_x, d, h_xd, params, counters),
        LineSearchKind::StrongWolfe => wolfe_strong(problem, cone, x, f_x, d, h_xd, params, counters),
    }
}

/// Re-checks the acceptance conditions of `kind` from raw values. The Wolfe
/// kinds need `h_new_d = h(x + alpha d, d)`; a missing value fails them.
#[allow(clippy::too_many_arguments)]
pub fn verify_conditions(
    kind: LineSearchKind,
    f_x: &[f64],
    f_new: &[f64],
    h_xd: f64,
    h_new_d: Option<f64>,
    alpha: f64,
    rho: f64,
    sigma: f64,
    cone: &ConeOrder,
) -> bool {
    if !(alpha > 0.0) || !sufficient_decrease(cone, f_x, f_new, h_xd, alpha, rho) {
        return false;
    }
    match (kind, h_new_d) {
        (LineSearchKind::Armijo, _) => true,
        (LineSearchKind::Wolfe, Some(h)) => h >= sigma * h_xd,
        (LineSearchKind::StrongWolfe, Some(h)) => h.abs() <= sigma * h_xd.abs(),
        (_, None) => false,
    }
}
