//! Performance profiles.
//!
//! For a table `t[p][s]` of positive costs (or failures) the ratio
//! `r[p][s] = t[p][s] / min_s t[p][s]` is formed per problem, and each solver's
//! profile is `rho_s(tau) = |{p : r[p][s] <= tau}| / |P|`. Failures get an
//! infinite ratio and are never counted.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::config::{Aggregate, Measurement};
use super::sweep::RunRow;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileTable {
    pub solver_names: Vec<String>,
    pub problem_ids: Vec<String>,
    /// `t[p][s]`; `None` marks a failure.
    pub t: Vec<Vec<Option<f64>>>,
}

impl ProfileTable {
    pub fn new(
        solver_names: Vec<String>,
        problem_ids: Vec<String>,
        t: Vec<Vec<Option<f64>>>,
    ) -> Result<Self> {
        if t.len() != problem_ids.len() {
            return Err(Error::Config("one row per problem id is required".into()));
        }
        for row in &t {
            if row.len() != solver_names.len() {
                return Err(Error::Config("one column per solver is required".into()));
            }
            if row.iter().flatten().any(|v| !(v.is_finite() && *v > 0.0)) {
                return Err(Error::Config("performance values must be finite and positive".into()));
            }
        }
        Ok(ProfileTable {
            solver_names,
            problem_ids,
            t,
        })
    }
}

/// Cost of a converged run under `measurement`. Zero-iteration runs count as
/// one iteration and times are floored at a nanosecond so ratios stay finite.
pub fn measure(row: &RunRow, measurement: Measurement) -> Option<f64> {
    if !row.converged() {
        return None;
    }
    Some(match measurement {
        Measurement::Iters => row.iters.max(1) as f64,
        Measurement::Time => row.wall_time_s.max(1e-9),
        Measurement::FEvals => row.f_evals.max(1) as f64,
        Measurement::JEvals => row.j_evals.max(1) as f64,
    })
}

/// Builds the table with rows and columns in canonical (sorted) order, so the
/// result does not depend on the order of `rows`.
pub fn build_table(rows: &[RunRow], measurement: Measurement, aggregate: Aggregate) -> Result<ProfileTable> {
    if rows.is_empty() {
        return Err(Error::Config("no runs to profile".into()));
    }
    let mut solvers: Vec<String> = rows.iter().map(RunRow::solver_label).collect();
    solvers.sort();
    solvers.dedup();

    // (problem, start) -> solver -> value
    let mut cells: BTreeMap<(String, usize), BTreeMap<String, Option<f64>>> = BTreeMap::new();
    for row in rows {
        let slot = cells
            .entry((row.problem.clone(), row.start_idx))
            .or_default();
        if slot.insert(row.solver_label(), measure(row, measurement)).is_some() {
            return Err(Error::Config(format!(
                "duplicate run for {} start {} with {}",
                row.problem,
                row.start_idx,
                row.solver_label()
            )));
        }
    }

    let lookup = |slot: &BTreeMap<String, Option<f64>>, s: &String| slot.get(s).copied().flatten();
    let (ids, t) = match aggregate {
        Aggregate::PerRun => cells
            .iter()
            .map(|((problem, idx), slot)| {
                (
                    format!("{problem}#{idx}"),
                    solvers.iter().map(|s| lookup(slot, s)).collect(),
                )
            })
            .unzip(),
        Aggregate::Median => {
            let mut per_problem: BTreeMap<&str, Vec<&BTreeMap<String, Option<f64>>>> = BTreeMap::new();
            for ((problem, _), slot) in &cells {
                per_problem.entry(problem).or_default().push(slot);
            }
            per_problem
                .into_iter()
                .map(|(problem, slots)| {
                    let row = solvers
                        .iter()
                        .map(|s| median(slots.iter().map(|slot| lookup(slot, s))))
                        .collect();
                    (problem.to_string(), row)
                })
                .unzip()
        }
    };
    ProfileTable::new(solvers, ids, t)
}

/// Median with failures treated as `+inf`; an infinite median is a failure.
fn median(values: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    let mut v: Vec<f64> = values.map(|x| x.unwrap_or(f64::INFINITY)).collect();
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let n = v.len();
    let mid = if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    };
    mid.is_finite().then_some(mid)
}

/// Step function `rho_s` given by its breakpoints `(tau, rho)`, `tau` strictly
/// increasing and starting at 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    pub solver: String,
    pub breakpoints: Vec<(f64, f64)>,
}

impl Profile {
    pub fn rho_at(&self, tau: f64) -> f64 {
        self.breakpoints
            .iter()
            .take_while(|(t, _)| *t <= tau)
            .last()
            .map_or(0.0, |(_, r)| *r)
    }

    /// Fraction of problems solved at all (`rho` as `tau -> inf`).
    pub fn robustness(&self) -> f64 {
        self.breakpoints.last().map_or(0.0, |(_, r)| *r)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileSet {
    pub profiles: Vec<Profile>,
    /// Problems no solver solved; excluded from `|P|`.
    pub dropped: Vec<String>,
    pub num_problems: usize,
    /// Largest finite ratio seen.
    pub tau_max: f64,
}

pub fn performance_profile(table: &ProfileTable) -> Result<ProfileSet> {
    if table.solver_names.is_empty() || table.problem_ids.is_empty() {
        return Err(Error::Config("empty performance table".into()));
    }
    let mut ratios: Vec<Vec<f64>> = vec![Vec::new(); table.solver_names.len()];
    let mut dropped = Vec::new();
    let mut kept = 0usize;
    let mut tau_max = 1.0f64;
    for (id, row) in table.problem_ids.iter().zip(&table.t) {
        let best = row.iter().flatten().copied().fold(f64::INFINITY, f64::min);
        if !best.is_finite() {
            dropped.push(id.clone());
            continue;
        }
        kept += 1;
        for (s, cell) in row.iter().enumerate() {
            if let Some(v) = cell {
                let r = v / best;
                tau_max = tau_max.max(r);
                ratios[s].push(r);
            }
        }
    }
    if kept == 0 {
        return Err(Error::Config("no problem was solved by any solver".into()));
    }
    let total = kept as f64;
    let profiles = table
        .solver_names
        .iter()
        .zip(ratios)
        .map(|(name, mut r)| {
            r.sort_by(f64::total_cmp);
            let mut breakpoints = vec![(1.0, 0.0)];
            for (i, &tau) in r.iter().enumerate() {
                let rho = (i + 1) as f64 / total;
                match breakpoints.last_mut() {
                    Some(last) if last.0 == tau => last.1 = rho,
                    _ => breakpoints.push((tau, rho)),
                }
            }
            Profile {
                solver: name.clone(),
                breakpoints,
            }
        })
        .collect();
    Ok(ProfileSet {
        profiles,
        dropped,
        num_problems: kept,
        tau_max,
    })
}

/// `# <solver>` line, `tau<TAB>rho` header, one breakpoint per line; blocks
/// separated by a blank line. Values use shortest round-trip formatting.
pub fn profiles_to_tsv(set: &ProfileSet) -> String {
    let mut out = String::new();
    for (i, p) in set.profiles.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let _ = writeln!(out, "# {}", p.solver);
        out.push_str("tau\trho\n");
        for (tau, rho) in &p.breakpoints {
            let _ = writeln!(out, "{tau}\t{rho}");
        }
    }
    out
}

pub fn parse_profiles_tsv(text: &str) -> Result<Vec<Profile>> {
    let mut profiles: Vec<Profile> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let bad = || Error::Config(format!("profile TSV line {}: `{line}`", lineno + 1));
        if line.trim().is_empty() || line == "tau\trho" {
            continue;
        }
        if let Some(name) = line.strip_prefix("# ") {
            profiles.push(Profile {
                solver: name.to_string(),
                breakpoints: Vec::new(),
            });
            continue;
        }
        let (tau, rho) = line.split_once('\t').ok_or_else(bad)?;
        let point = (
            tau.parse::<f64>().map_err(|_| bad())?,
            rho.parse::<f64>().map_err(|_| bad())?,
        );
        profiles.last_mut().ok_or_else(bad)?.breakpoints.push(point);
    }
    Ok(profiles)
}
