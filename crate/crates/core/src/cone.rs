//! Ordering cones given by a finite generator set of the dual cone.
//!
//! A closed convex pointed cone `K` with nonempty interior is represented by
//! unit vectors `w_1..w_q` spanning its dual `K*` together with an interior
//! vector `e` of `K` satisfying `<w_j, e> <= 1`. Everything downstream works
//! through the support function
//!
//! ```text
//! phi(y) = max_j <y, w_j>
//! ```
//!
//! which is negative exactly on `-int(K)` and nonpositive on `-K`.

use crate::error::{check_len, Error, Result};
use crate::linalg::{dot, norm, Matrix};

/// Slack applied to `phi` in cone comparisons to absorb roundoff.
pub const TOL_CONE: f64 = 1e-12;

const UNIT_NORM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct ConeOrder {
    generators: Matrix,
    e: Vec<f64>,
}

impl ConeOrder {
    /// `K = R^m_+` with the canonical basis as generators and `e = (1, ..., 1)`.
    pub fn nonneg_orthant(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidCone("objective dimension must be positive".into()));
        }
        let mut generators = Matrix::zeros(m, m);
        for i in 0..m {
            generators.row_mut(i)[i] = 1.0;
        }
        ConeOrder::new(generators.to_rows(), vec![1.0; m])
    }

    /// Polyhedral cone from (not necessarily normalized) generators of `K*`.
    ///
    /// Each generator is scaled to unit length. `e` is the normalized mean of
    /// the generators, rescaled so that `max_j <w_j, e> = 1`.
    pub fn polyhedral(generators: Vec<Vec<f64>>) -> Result<Self> {
        let unit = normalize_all(generators)?;
        let m = unit[0].len();
        let mut mean = vec![0.0; m];
        for w in &unit {
            for (acc, wi) in mean.iter_mut().zip(w) {
                *acc += wi;
            }
        }
        let len = norm(&mean);
        if len == 0.0 {
            return Err(Error::InvalidCone("generators have zero mean; cone is not pointed".into()));
        }
        let mean: Vec<f64> = mean.iter().map(|v| v / len).collect();
        let top = unit
            .iter()
            .map(|w| dot(w, &mean))
            .fold(f64::NEG_INFINITY, f64::max);
        if top <= 0.0 {
            return Err(Error::InvalidCone("no interior direction found".into()));
        }
        let e = mean.iter().map(|v| v / top).collect();
        ConeOrder::new(unit, e)
    }

    /// Polyhedral cone with a caller-supplied interior vector `e`.
    pub fn polyhedral_with_e(generators: Vec<Vec<f64>>, e: Vec<f64>) -> Result<Self> {
        ConeOrder::new(normalize_all(generators)?, e)
    }

    /// Validating constructor; generators must already have unit norm.
    pub fn new(generators: Vec<Vec<f64>>, e: Vec<f64>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::InvalidCone("at least one generator is required".into()));
        }
        let generators = Matrix::from_rows(&generators)?;
        let m = generators.cols();
        if m == 0 {
            return Err(Error::InvalidCone("objective dimension must be positive".into()));
        }
        check_len("interior vector e", m, e.len())?;
        if !generators.is_finite() || e.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidCone("non-finite cone data".into()));
        }
        for j in 0..generators.rows() {
            let w = generators.row(j);
            if (norm(w) - 1.0).abs() > UNIT_NORM_TOL {
                return Err(Error::InvalidCone(format!(
                    "generator {j} has norm {}, expected 1",
                    norm(w)
                )));
            }
            let we = dot(w, &e);
            if we > 1.0 + UNIT_NORM_TOL {
                return Err(Error::InvalidCone(format!("<w_{j}, e> = {we} exceeds 1")));
            }
            if we <= 0.0 {
                return Err(Error::InvalidCone(format!(
                    "<w_{j}, e> = {we}; e is not interior to the cone"
                )));
            }
        }
        Ok(ConeOrder { generators, e })
    }

    /// Objective-space dimension `m`.
    pub fn dim(&self) -> usize {
        self.generators.cols()
    }

    /// Number of generators `q`.
    pub fn num_generators(&self) -> usize {
        self.generators.rows()
    }

    pub fn generators(&self) -> &Matrix {
        &self.generators
    }

    pub fn generator(&self, j: usize) -> &[f64] {
        self.generators.row(j)
    }

    pub fn e(&self) -> &[f64] {
        &self.e
    }

    pub fn is_orthant(&self) -> bool {
        let q = self.num_generators();
        q == self.dim()
            && (0..q).all(|j| {
                self.generator(j)
                    .iter()
                    .enumerate()
                    .all(|(i, &v)| v == if i == j { 1.0 } else { 0.0 })
            })
    }

    pub fn phi(&self, y: &[f64]) -> Result<f64> {
        check_len("phi argument", self.dim(), y.len())?;
        Ok(self.phi_unchecked(y))
    }

    pub(crate) fn phi_unchecked(&self, y: &[f64]) -> f64 {
        (0..self.num_generators())
            .map(|j| dot(self.generator(j), y))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// `h = phi(J d)`, the worst-case directional derivative along `d`.
    pub fn h(&self, jacobian: &Matrix, d: &[f64]) -> Result<f64> {
        check_len("Jacobian rows", self.dim(), jacobian.rows())?;
        let jd = jacobian.mul_vec(d)?;
        Ok(self.phi_unchecked(&jd))
    }

    /// `u <=_K v`, i.e. `phi(u - v) <= TOL_CONE`.
    pub fn cone_leq(&self, u: &[f64], v: &[f64]) -> Result<bool> {
        check_len("cone_leq left operand", self.dim(), u.len())?;
        check_len("cone_leq right operand", self.dim(), v.len())?;
        let diff: Vec<f64> = u.iter().zip(v).map(|(a, b)| a - b).collect();
        Ok(self.phi_unchecked(&diff) <= TOL_CONE)
    }

    /// Rows `g_j = J^T w_j`, so that `h(x, d) = max_j <g_j, d>`.
    pub fn effective_gradients(&self, jacobian: &Matrix) -> Result<Matrix> {
        check_len("Jacobian rows", self.dim(), jacobian.rows())?;
        if self.is_orthant() {
            return Ok(jacobian.clone());
        }
        let q = self.num_generators();
        let n = jacobian.cols();
        let mut g = Matrix::zeros(q, n);
        for j in 0..q {
            let row = jacobian.tr_mul_vec(self.generator(j))?;
            g.row_mut(j).copy_from_slice(&row);
        }
        Ok(g)
    }
}

/// `max_j <g_j, d>` over the rows of an effective-gradient matrix.
pub fn max_row_dot(gradients: &Matrix, d: &[f64]) -> f64 {
    (0..gradients.rows())
        .map(|j| dot(gradients.row(j), d))
        .fold(f64::NEG_INFINITY, f64::max)
}

fn normalize_all(generators: Vec<Vec<f64>>) -> Result<Vec<Vec<f64>>> {
    if generators.is_empty() {
        return Err(Error::InvalidCone("at least one generator is required".into()));
    }
    generators
        .into_iter()
        .enumerate()
        .map(|(j, w)| {
            let len = norm(&w);
            if !(len.is_finite() && len > 0.0) {
                return Err(Error::InvalidCone(format!("generator {j} has zero or non-finite norm")));
            }
            Ok(w.iter().map(|v| v / len).collect())
        })
        .collect()
}
