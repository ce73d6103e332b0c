use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::directions::DirectionMethod;
use crate::error::{Error, Result};
use crate::linesearch::LineSearchKind;
use crate::problems::{find_problem, problem_names};
use crate::solver::SolverOptions;

/// A direction rule paired with a stepsize rule, written `method:linesearch`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MethodSpec {
    pub method: DirectionMethod,
    pub linesearch: LineSearchKind,
}

impl MethodSpec {
    pub fn new(method: DirectionMethod, linesearch: LineSearchKind) -> Self {
        MethodSpec { method, linesearch }
    }

    /// Column label used in profiles, e.g. `mprp/wolfe`.
    pub fn label(&self) -> String {
        solver_label(self.method.id(), self.linesearch.id())
    }

    /// MPRP-W, MPRP-A, PRP, PRP+ and FR as compared in the benchmark.
    pub fn default_set() -> Vec<MethodSpec> {
        use DirectionMethod::*;
        use LineSearchKind::*;
        vec![
            MethodSpec::new(Mprp, Wolfe),
            MethodSpec::new(Mprp, Armijo),
            MethodSpec::new(Prp, StrongWolfe),
            MethodSpec::new(PrpPlus, StrongWolfe),
            MethodSpec::new(Fr, StrongWolfe),
        ]
    }
}

pub fn solver_label(method: &str, linesearch: &str) -> String {
    format!("{method}/{linesearch}")
}

impl fmt::Display for MethodSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.method, self.linesearch)
    }
}

impl FromStr for MethodSpec {
    type Err = Error;

    /// `mprp:wolfe`. A bare method id gets `wolfe` when its directions are
    /// always descent directions and `strong-wolfe` otherwise.
    fn from_str(s: &str) -> Result<Self> {
        let (m, ls) = match s.split_once(':') {
            Some((m, ls)) => (m, Some(ls)),
            None => (s, None),
        };
        let method: DirectionMethod = m.parse()?;
        let linesearch = match ls {
            Some(ls) => ls.parse()?,
            None if method.guarantees_descent() => LineSearchKind::Wolfe,
            None => LineSearchKind::StrongWolfe,
        };
        Ok(MethodSpec { method, linesearch })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Measurement {
    Iters,
    Time,
    FEvals,
    JEvals,
}

impl Measurement {
    pub const ALL: [Measurement; 4] = [
        Measurement::Iters,
        Measurement::Time,
        Measurement::FEvals,
        Measurement::JEvals,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Measurement::Iters => "iters",
            Measurement::Time => "time",
            Measurement::FEvals => "fevals",
            Measurement::JEvals => "jevals",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            Measurement::Iters => "iterations",
            Measurement::Time => "CPU time",
            Measurement::FEvals => "function evaluations",
            Measurement::JEvals => "Jacobian evaluations",
        }
    }

    /// Parses one id or `all`.
    pub fn parse_list(s: &str) -> Result<Vec<Measurement>> {
        if s.trim() == "all" {
            return Ok(Measurement::ALL.to_vec());
        }
        split_list(s).map(|m| m.parse()).collect()
    }
}

impl fmt::Display for Measurement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Measurement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        let key = match key.as_str() {
            "iterations" => "iters",
            "cpu" | "wall_time" => "time",
            "f_evals" => "fevals",
            "j_evals" | "gevals" => "jevals",
            other => other,
        };
        Measurement::ALL
            .into_iter()
            .find(|m| m.id() == key)
            .ok_or_else(|| Error::Config(format!("unknown measurement `{s}`")))
    }
}

/// How repeated starts of one test problem enter a profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Aggregate {
    /// Every (problem, start) pair is its own profile row.
    #[default]
    PerRun,
    /// One row per problem holding the median over starts.
    Median,
}

impl FromStr for Aggregate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "per-run" | "per_run" | "none" => Ok(Aggregate::PerRun),
            "median" => Ok(Aggregate::Median),
            other => Err(Error::Config(format!("unknown aggregation `{other}`"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub methods: Vec<MethodSpec>,
    pub problems: Vec<String>,
    pub starts_per_problem: usize,
    pub seed: u64,
    pub output_dir: PathBuf,
    pub measurements: Vec<Measurement>,
    pub aggregate: Aggregate,
    /// Shared solver settings; each method entry sets its own direction rule and line search.
    pub solver: SolverOptions,
    /// Write per-iteration traces next to the results.
    pub trace: bool,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            methods: MethodSpec::default_set(),
            problems: problem_names(),
            starts_per_problem: 200,
            seed: 0,
            output_dir: PathBuf::from("results"),
            measurements: Measurement::ALL.to_vec(),
            aggregate: Aggregate::PerRun,
            solver: SolverOptions {
                keep_trace: false,
                ..SolverOptions::default()
            },
            trace: false,
        }
    }
}

impl BenchConfig {
    /// Applies `key = value` settings on top of the defaults. Keys use
    /// underscores or dashes interchangeably.
    pub fn from_pairs(pairs: &BTreeMap<String, String>) -> Result<Self> {
        let mut cfg = BenchConfig::default();
        for (key, value) in pairs {
            cfg.set(key, value)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        let num = |what: &str| -> Result<f64> {
            value
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("{what}: expected a number, got `{value}`")))
        };
        let int = |what: &str| -> Result<u64> {
            value
                .parse::<u64>()
                .map_err(|_| Error::Config(format!("{what}: expected an integer, got `{value}`")))
        };
        match key.trim().replace('-', "_").as_str() {
            "methods" => {
                self.methods = split_list(value).map(str::parse).collect::<Result<_>>()?;
            }
            "problems" => {
                self.problems = if value == "all" {
                    problem_names()
                } else {
                    split_list(value).map(String::from).collect()
                };
            }
            "starts" | "starts_per_problem" => self.starts_per_problem = int("starts")? as usize,
            "seed" => self.seed = int("seed")?,
            "out" | "output_dir" => self.output_dir = PathBuf::from(value),
            "measure" | "measurement" => self.measurements = Measurement::parse_list(value)?,
            "aggregate" => self.aggregate = value.parse()?,
            "rho" => self.solver.ls_params.rho = num("rho")?,
            "sigma" => self.solver.ls_params.sigma = num("sigma")?,
            "delta" => self.solver.ls_params.delta = num("delta")?,
            "alpha_max" => self.solver.ls_params.alpha_max = num("alpha_max")?,
            "max_trials" => self.solver.ls_params.max_trials = int("max_trials")? as usize,
            "mu" => self.solver.mu = num("mu")?,
            "max_iters" => self.solver.max_iters = int("max_iters")? as usize,
            "tol" | "tol_crit" => self.solver.tol_crit = num("tol")?,
            "trace" => {
                self.trace = match value {
                    "true" | "1" | "yes" | "on" => true,
                    "false" | "0" | "no" | "off" => false,
                    _ => return Err(Error::Config(format!("trace: expected a boolean, got `{value}`"))),
                }
            }
            other => return Err(Error::Config(format!("unknown config key `{other}`"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.methods.is_empty() {
            return Err(Error::Config("at least one method is required".into()));
        }
        if self.problems.is_empty() {
            return Err(Error::Config("at least one problem is required".into()));
        }
        if self.starts_per_problem == 0 {
            return Err(Error::Config("starts must be at least 1".into()));
        }
        if self.measurements.is_empty() {
            return Err(Error::Config("at least one measurement is required".into()));
        }
        for name in &self.problems {
            find_problem(name)?;
        }
        self.solver.validate()
    }
}

/// Reads a flat `key = value` file. Blank lines and `#` comments are skipped.
pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", lineno + 1)))?;
        out.insert(key.trim().replace('-', "_"), value.trim().to_string());
    }
    Ok(out)
}

fn split_list(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').map(str::trim).filter(|t| !t.is_empty())
}
