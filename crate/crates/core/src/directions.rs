//! Conjugate parameters and the search-direction recurrence
//! `d_k = v_k + beta_k d_{k-1}` (`d_0 = v_0`).
//!
//! Every coefficient is written in terms of `h` values. With
//! `b = h(x_{k-1}, v_k)` the modified PRP coefficient is
//!
//! ```text
//!               -h(x_k, v_k) (|b| + b)
//! beta = ------------------------------------------------------------
//!        max{ mu |h(x_k, d_{k-1}) b| , -mu h(x_{k-1}, v_{k-1}) |b| }
//! ```
//!
//! which is nonnegative and yields `h(x_k, d_k) <= (1 - 2/mu) h(x_k, v_k)`.

use std::fmt;
use std::str::FromStr;

use crate::cone::max_row_dot;
use crate::error::{Error, Result};
use crate::linalg::Matrix;

const DENOMINATOR_FLOOR: f64 = 1e-300;

/// Coefficient rules selectable from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DirectionMethod {
    Mprp,
    Prp,
    PrpPlus,
    Fr,
    Cd,
    Dy,
    Hs,
    /// `beta = 0`: steepest descent.
    Sd,
}

impl DirectionMethod {
    pub const ALL: [DirectionMethod; 8] = [
        DirectionMethod::Mprp,
        DirectionMethod::Prp,
        DirectionMethod::PrpPlus,
        DirectionMethod::Fr,
        DirectionMethod::Cd,
        DirectionMethod::Dy,
        DirectionMethod::Hs,
        DirectionMethod::Sd,
    ];

    pub fn id(self) -> &'static str {
        match self {
            DirectionMethod::Mprp => "mprp",
            DirectionMethod::Prp => "prp",
            DirectionMethod::PrpPlus => "prp+",
            DirectionMethod::Fr => "fr",
            DirectionMethod::Cd => "cd",
            DirectionMethod::Dy => "dy",
            DirectionMethod::Hs => "hs",
            DirectionMethod::Sd => "sd",
        }
    }

    /// Methods whose directions are descent directions by construction.
    pub fn guarantees_descent(self) -> bool {
        matches!(self, DirectionMethod::Mprp | DirectionMethod::Sd)
    }

    pub fn beta(self, h: &BetaInputs, mu: f64) -> Result<f64> {
        match self {
            DirectionMethod::Mprp => {
                beta_mprp(h.h_k_vk, h.h_km1_vk, h.h_k_dkm1, h.h_km1_vkm1, mu)
            }
            DirectionMethod::Prp => beta_prp(h.h_k_vk, h.h_km1_vk, h.h_km1_vkm1),
            DirectionMethod::PrpPlus => {
                beta_prp(h.h_k_vk, h.h_km1_vk, h.h_km1_vkm1).map(beta_prp_plus)
            }
            DirectionMethod::Fr => beta_fr(h.h_k_vk, h.h_km1_vkm1),
            DirectionMethod::Cd => beta_cd(h.h_k_vk, h.h_km1_dkm1),
            DirectionMethod::Dy => beta_dy(h.h_k_vk, h.h_k_dkm1, h.h_km1_dkm1),
            DirectionMethod::Hs => beta_hs(h.h_k_vk, h.h_km1_vk, h.h_k_dkm1, h.h_km1_dkm1),
            DirectionMethod::Sd => Ok(0.0),
        }
    }
}

impl fmt::Display for DirectionMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for DirectionMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DirectionMethod::ALL
            .into_iter()
            .find(|m| m.id() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| Error::Config(format!("unknown direction method `{s}`")))
    }
}

/// The `h` values that enter the conjugate parameters at iteration `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaInputs {
    /// `h(x_k, v_k)`
    pub h_k_vk: f64,
    /// `h(x_{k-1}, v_k)`
    pub h_km1_vk: f64,
    /// `h(x_k, d_{k-1})`
    pub h_k_dkm1: f64,
    /// `h(x_{k-1}, v_{k-1})`
    pub h_km1_vkm1: f64,
    /// `h(x_{k-1}, d_{k-1})`
    pub h_km1_dkm1: f64,
}

/// What a run carries from iteration `k-1` into iteration `k`.
#[derive(Debug, Clone)]
pub struct DirectionState {
    pub d_prev: Vec<f64>,
    /// Effective gradients `J(x_{k-1})^T w_j` as rows.
    pub gradients_prev: Matrix,
    pub h_prev_vprev: f64,
    pub h_prev_dprev: f64,
}

impl DirectionState {
    /// Cross-iteration `h` values from the cached previous gradients and the
    /// current ones. No objective evaluations happen here.
    pub fn beta_inputs(&self, gradients: &Matrix, v: &[f64], h_k_vk: f64) -> BetaInputs {
        BetaInputs {
            h_k_vk,
            h_km1_vk: max_row_dot(&self.gradients_prev, v),
            h_k_dkm1: max_row_dot(gradients, &self.d_prev),
            h_km1_vkm1: self.h_prev_vprev,
            h_km1_dkm1: self.h_prev_dprev,
        }
    }
}

pub fn beta_mprp(h_k_vk: f64, h_km1_vk: f64, h_k_dkm1: f64, h_km1_vkm1: f64, mu: f64) -> Result<f64> {
    if !(mu > 2.0) {
        return Err(Error::Config(format!("mu must exceed 2, got {mu}")));
    }
    let b = h_km1_vk;
    let numerator = -h_k_vk * (b.abs() + b);
    if numerator == 0.0 {
        return Ok(0.0);
    }
    let denominator = (mu * (h_k_dkm1 * b).abs()).max(-mu * h_km1_vkm1 * b.abs());
    if denominator <= 0.0 {
        return Ok(0.0);
    }
    Ok(numerator / denominator)
}

fn guarded(method: &'static str, numerator: f64, denominator: f64) -> Result<f64> {
    if denominator.abs() < DENOMINATOR_FLOOR {
        Err(Error::DegenerateDenominator {
            method,
            denominator,
        })
    } else {
        Ok(numerator / denominator)
    }
}

pub fn beta_prp(h_k_vk: f64, h_km1_vk: f64, h_km1_vkm1: f64) -> Result<f64> {
    guarded("prp", -h_k_vk + h_km1_vk, -h_km1_vkm1)
}

pub fn beta_prp_plus(beta_prp: f64) -> f64 {
    beta_prp.max(0.0)
}

pub fn beta_fr(h_k_vk: f64, h_km1_vkm1: f64) -> Result<f64> {
    guarded("fr", h_k_vk, h_km1_vkm1)
}

pub fn beta_cd(h_k_vk: f64, h_km1_dkm1: f64) -> Result<f64> {
    guarded("cd", h_k_vk, h_km1_dkm1)
}

pub fn beta_dy(h_k_vk: f64, h_k_dkm1: f64, h_km1_dkm1: f64) -> Result<f64> {
    guarded("dy", -h_k_vk, h_k_dkm1 - h_km1_dkm1)
}

pub fn beta_hs(h_k_vk: f64, h_km1_vk: f64, h_k_dkm1: f64, h_km1_dkm1: f64) -> Result<f64> {
    guarded("hs", -h_k_vk + h_km1_vk, h_k_dkm1 - h_km1_dkm1)
}

pub fn direction_update(v: &[f64], beta: f64, d_prev: Option<&[f64]>) -> Vec<f64> {
    match d_prev {
        None => v.to_vec(),
        Some(d) => v.iter().zip(d).map(|(vi, di)| vi + beta * di).collect(),
    }
}
