//! Steepest-descent direction `v(x)` and optimal value `theta(x)` of
//!
//! ```text
//! min_d  h(x, d) + 1/2 |d|^2
//! ```
//!
//! solved through its dual over the unit simplex,
//!
//! ```text
//! min_{lambda in simplex}  1/2 | sum_j lambda_j g_j |^2,   g_j = J^T w_j,
//! ```
//!
//! with `v = -sum_j lambda_j g_j` and `theta = -1/2 |v|^2`. The duality gap
//! `h(x, v) + |v|^2` is the Frank-Wolfe gap of the dual and is driven below
//! the requested tolerance.

use crate::cone::{max_row_dot, ConeOrder};
use crate::error::{Error, Result};
use crate::linalg::{dot, norm_sq, Matrix};

pub const MAX_DUAL_ITERS: usize = 10_000;

#[derive(Debug, Clone)]
pub struct SteepestResult {
    pub v: Vec<f64>,
    /// Optimal value, `-1/2 |v|^2`.
    pub theta: f64,
    /// `h(x, v)` evaluated from the Jacobian, not from the dual.
    pub h_at_v: f64,
    /// Simplex weights certifying `v`.
    pub lambda: Vec<f64>,
    /// Primal-dual gap `h(x, v) + |v|^2`.
    pub gap: f64,
    /// Effective gradients `g_j = J^T w_j` as rows, reusable for `h` at this point.
    pub gradients: Matrix,
}

/// Default dual tolerance `1e-12 (1 + |J|_F)`.
pub fn default_tolerance(jacobian: &Matrix) -> f64 {
    1e-12 * (1.0 + jacobian.frobenius_norm())
}

pub fn steepest_direction_default(jacobian: &Matrix, cone: &ConeOrder) -> Result<SteepestResult> {
    steepest_direction(jacobian, cone, default_tolerance(jacobian))
}

pub fn steepest_direction(jacobian: &Matrix, cone: &ConeOrder, tol: f64) -> Result<SteepestResult> {
    if !(tol > 0.0) {
        return Err(Error::Config(format!("subproblem tolerance must be positive, got {tol}")));
    }
    let gradients = cone.effective_gradients(jacobian)?;
    let q = gradients.rows();
    let gram = gram(&gradients);

    let lambda = if gram.as_slice().iter().all(|&v| v == 0.0) {
        vec![1.0 / q as f64; q]
    } else {
        match q {
            1 => vec![1.0],
            2 => two_point(&gram),
            _ => match spectral_projected_gradient(&gram, tol) {
                Ok(lambda) => lambda,
                // degenerate faces can stall the gradient method; finish exactly
                Err(err) => min_norm_point(&gram, tol).ok_or(err)?,
            },
        }
    };

    let mut v = gradients.tr_mul_vec(&lambda)?;
    v.iter_mut().for_each(|vi| *vi = -*vi);
    let vv = norm_sq(&v);
    let h_at_v = if vv == 0.0 { 0.0 } else { max_row_dot(&gradients, &v) };
    Ok(SteepestResult {
        theta: -0.5 * vv,
        h_at_v,
        gap: h_at_v + vv,
        v,
        lambda,
        gradients,
    })
}

/// `theta >= -tol_crit`.
pub fn is_critical(theta: f64, tol_crit: f64) -> bool {
    theta >= -tol_crit
}

fn gram(g: &Matrix) -> Matrix {
    let q = g.rows();
    let mut out = Matrix::zeros(q, q);
    for i in 0..q {
        for j in 0..=i {
            let v = dot(g.row(i), g.row(j));
            out.row_mut(i)[j] = v;
            out.row_mut(j)[i] = v;
        }
    }
    out
}

fn two_point(gram: &Matrix) -> Vec<f64> {
    // |l g1 + (1-l) g2|^2 = |g2|^2 + 2 l <g2, g1 - g2> + l^2 |g1 - g2|^2
    let (a11, a12, a22) = (gram.row(0)[0], gram.row(0)[1], gram.row(1)[1]);
    let curvature = a11 - 2.0 * a12 + a22;
    let slope = a12 - a22;
    let l = if curvature > 0.0 {
        (-slope / curvature).clamp(0.0, 1.0)
    } else {
        0.5
    };
    vec![l, 1.0 - l]
}

fn quad(gram: &Matrix, lambda: &[f64]) -> (Vec<f64>, f64) {
    let grad = gram.mul_vec(lambda).expect("square gram matrix");
    let value = 0.5 * dot(lambda, &grad);
    (grad, value)
}

/// Frank-Wolfe gap `lambda^T Q lambda - min_j (Q lambda)_j`.
fn fw_gap(lambda: &[f64], grad: &[f64]) -> f64 {
    let low = grad.iter().copied().fold(f64::INFINITY, f64::min);
    dot(lambda, grad) - low
}

/// Spectral projected gradient with a nonmonotone Armijo safeguard.
fn spectral_projected_gradient(gram: &Matrix, tol: f64) -> Result<Vec<f64>> {
    const MEMORY: usize = 10;
    const GAMMA: f64 = 1e-4;
    let q = gram.rows();
    let lipschitz = (0..q)
        .map(|i| gram.row(i).iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max);

    let mut lambda = vec![1.0 / q as f64; q];
    let (mut grad, mut value) = quad(gram, &lambda);
    let mut step = 1.0 / lipschitz;
    let mut history = vec![value; 1];
    let mut best = (fw_gap(&lambda, &grad), lambda.clone());

    for _ in 0..MAX_DUAL_ITERS {
        let gap = fw_gap(&lambda, &grad);
        if gap < best.0 {
            best = (gap, lambda.clone());
        }
        if gap <= tol {
            return Ok(lambda);
        }
        let trial: Vec<f64> = lambda.iter().zip(&grad).map(|(l, g)| l - step * g).collect();
        let target = project_simplex(&trial);
        let dir: Vec<f64> = target.iter().zip(&lambda).map(|(t, l)| t - l).collect();
        let slope = dot(&grad, &dir);
        if slope >= 0.0 {
            // Projected step is stationary to roundoff.
            break;
        }
        let reference = history.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut t = 1.0;
        let (next, next_grad, next_value) = loop {
            let cand: Vec<f64> = lambda.iter().zip(&dir).map(|(l, d)| l + t * d).collect();
            let (g, v) = quad(gram, &cand);
            if v <= reference + GAMMA * t * slope || t < 1e-12 {
                break (cand, g, v);
            }
            t *= 0.5;
        };
        let s: Vec<f64> = next.iter().zip(&lambda).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = next_grad.iter().zip(&grad).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        step = if sy > 0.0 {
            (dot(&s, &s) / sy).clamp(1e-30, 1e30)
        } else {
            1.0 / lipschitz
        };
        lambda = next;
        grad = next_grad;
        value = next_value;
        history.push(value);
        if history.len() > MEMORY {
            history.remove(0);
        }
    }

    let gap = fw_gap(&lambda, &grad);
    if gap < best.0 {
        best = (gap, lambda);
    }
    if best.0 <= tol {
        Ok(best.1)
    } else {
        Err(Error::Subproblem {
            lambda: best.1,
            gap: best.0,
        })
    }
}

/// Wolfe's minimum-norm-point algorithm on the hull of the gradients, run in
/// Gram coordinates. `None` if it stalls before the gap drops below `tol`.
fn min_norm_point(gram: &Matrix, tol: f64) -> Option<Vec<f64>> {
    let q = gram.rows();
    let start = (0..q).min_by(|&a, &b| gram.row(a)[a].total_cmp(&gram.row(b)[b]))?;
    let mut lambda = vec![0.0; q];
    lambda[start] = 1.0;
    let mut active = vec![start];
    let mut budget = MAX_DUAL_ITERS;

    loop {
        let (grad, _) = quad(gram, &lambda);
        let (entering, low) = grad
            .iter()
            .copied()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(&b.1))?;
        if dot(&lambda, &grad) - low <= tol {
            return Some(lambda);
        }
        if active.contains(&entering) {
            return None;
        }
        active.push(entering);

        loop {
            budget = budget.checked_sub(1)?;
            let alpha = affine_minimizer(gram, &active)?;
            if alpha.iter().all(|&a| a > 0.0) {
                for (&i, &a) in active.iter().zip(&alpha) {
                    lambda[i] = a;
                }
                break;
            }
            // move toward the affine minimizer until a weight hits zero
            let (mut t, mut blocking) = (1.0, None);
            for (k, &i) in active.iter().enumerate() {
                if alpha[k] <= 0.0 {
                    let ratio = lambda[i] / (lambda[i] - alpha[k]);
                    if ratio <= t {
                        t = ratio;
                        blocking = Some(i);
                    }
                }
            }
            let blocking = blocking?;
            if blocking == entering && t == 0.0 {
                return None;
            }
            for (&i, &a) in active.iter().zip(&alpha) {
                lambda[i] += t * (a - lambda[i]);
            }
            lambda[blocking] = 0.0;
            active.retain(|&i| i != blocking && lambda[i] > 0.0);
            for (i, l) in lambda.iter_mut().enumerate() {
                if !active.contains(&i) {
                    *l = 0.0;
                }
            }
        }
    }
}

/// Weights `alpha` (summing to one) of the minimum-norm point in the affine
/// hull of the `active` gradients.
fn affine_minimizer(gram: &Matrix, active: &[usize]) -> Option<Vec<f64>> {
    let k = active.len();
    let n = k + 1;
    // [G_SS 1; 1^T 0] [alpha; mu] = [0; 1]
    let mut a = vec![vec![0.0; n + 1]; n];
    for (r, &i) in active.iter().enumerate() {
        for (c, &j) in active.iter().enumerate() {
            a[r][c] = gram.row(i)[j];
        }
        a[r][k] = 1.0;
        a[k][r] = 1.0;
    }
    a[k][n] = 1.0;
    let scale = a.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    for col in 0..n {
        let pivot = (col..n).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))?;
        if a[pivot][col].abs() <= 1e-14 * scale {
            return None;
        }
        a.swap(col, pivot);
        for row in 0..n {
            if row != col {
                let f = a[row][col] / a[col][col];
                if f != 0.0 {
                    for c in col..=n {
                        a[row][c] -= f * a[col][c];
                    }
                }
            }
        }
    }
    Some((0..k).map(|r| a[r][n] / a[r][r]).collect())
}

/// Euclidean projection onto `{lambda >= 0, sum lambda = 1}` by sorting.
pub fn project_simplex(y: &[f64]) -> Vec<f64> {
    let mut sorted = y.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut shift = 0.0;
    for (i, &u) in sorted.iter().enumerate() {
        cumulative += u;
        let candidate = (cumulative - 1.0) / (i + 1) as f64;
        if u - candidate > 0.0 {
            shift = candidate;
        }
    }
    y.iter().map(|v| (v - shift).max(0.0)).collect()
}
