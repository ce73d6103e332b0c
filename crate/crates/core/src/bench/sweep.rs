use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{BenchConfig, MethodSpec};
use crate::error::{Error, Result};
use crate::problems::{find_problem, sample_start, SharedProblem};
use crate::solver::{solve, RunRecord, SolverOptions, TraceEntry};

pub const RESULTS_FILE: &str = "results.csv";
pub const TRACES_FILE: &str = "traces.csv";

/// One results-CSV row. Field order fixes the header:
/// `problem,method,linesearch,start_idx,seed,status,iters,f_evals,j_evals,wall_time_s,theta_final,restarts`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRow {
    pub problem: String,
    pub method: String,
    pub linesearch: String,
    pub start_idx: usize,
    pub seed: u64,
    pub status: String,
    pub iters: usize,
    pub f_evals: u64,
    pub j_evals: u64,
    pub wall_time_s: f64,
    pub theta_final: f64,
    pub restarts: usize,
}

impl RunRow {
    pub fn converged(&self) -> bool {
        self.status == "CONVERGED"
    }

    pub fn solver_label(&self) -> String {
        super::config::solver_label(&self.method, &self.linesearch)
    }
}

/// A finished sweep run with its full record.
#[derive(Debug, Clone)]
pub struct SweepRun {
    pub row: RunRow,
    pub record: RunRecord,
}

/// Seed of start `start_idx` for `problem`, derived from the master seed.
pub fn start_seed(master: u64, problem: &str, start_idx: usize) -> u64 {
    // FNV-1a over the name, mixed with splitmix64.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in problem.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    let mut z = master ^ h ^ (start_idx as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Runs every (problem, start, method) combination. All methods see the same
/// start for a given (problem, start index). Results are sorted by
/// `(problem, method, linesearch, start_idx)`.
pub fn run_sweep(cfg: &BenchConfig) -> Result<Vec<SweepRun>> {
    cfg.validate()?;
    let problems: Vec<SharedProblem> = cfg
        .problems
        .iter()
        .map(|name| find_problem(name))
        .collect::<Result<_>>()?;

    let mut jobs = Vec::new();
    for problem in &problems {
        for idx in 0..cfg.starts_per_problem {
            let seed = start_seed(cfg.seed, problem.name(), idx);
            let x0 = sample_start(problem.as_ref(), seed);
            for spec in &cfg.methods {
                jobs.push((problem.clone(), idx, seed, x0.clone(), *spec));
            }
        }
    }

    let mut runs = jobs
        .into_par_iter()
        .map(|(problem, idx, seed, x0, spec)| {
            let opts = SolverOptions {
                method: spec.method,
                linesearch: spec.linesearch,
                keep_trace: cfg.trace || cfg.solver.keep_trace,
                ..cfg.solver.clone()
            };
            let record = solve(problem.as_ref(), &x0, &opts)?;
            Ok(SweepRun {
                row: row_from_record(&record, idx, seed),
                record,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    runs.sort_by(|a, b| sort_key(&a.row).cmp(&sort_key(&b.row)));
    Ok(runs)
}

fn sort_key(row: &RunRow) -> (&str, &str, &str, usize) {
    (&row.problem, &row.method, &row.linesearch, row.start_idx)
}

pub fn row_from_record(record: &RunRecord, start_idx: usize, seed: u64) -> RunRow {
    RunRow {
        problem: record.problem.clone(),
        method: record.method.id().to_string(),
        linesearch: record.linesearch.id().to_string(),
        start_idx,
        seed,
        status: record.status.as_str().to_string(),
        iters: record.iters,
        f_evals: record.f_evals,
        j_evals: record.j_evals,
        wall_time_s: record.wall_time,
        theta_final: record.theta_final,
        restarts: record.restarts,
    }
}

/// Checks that `dir` exists (creating it) and accepts files.
pub fn prepare_output_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)
        .map_err(|e| Error::Config(format!("cannot create {}: {e}", dir.display())))?;
    let probe = dir.join(".vecopt-write-probe");
    fs::write(&probe, b"")
        .map_err(|e| Error::Config(format!("{} is not writable: {e}", dir.display())))?;
    let _ = fs::remove_file(probe);
    Ok(())
}

/// Runs the sweep and writes `results.csv` (plus `traces.csv` when traces are
/// enabled) into the output directory. Returns the results path.
pub fn run_suite(cfg: &BenchConfig) -> Result<PathBuf> {
    cfg.validate()?;
    prepare_output_dir(&cfg.output_dir)?;
    let runs = run_sweep(cfg)?;
    write_sweep(cfg, &runs)
}

/// Writes the files `run_suite` produces for already finished runs.
pub fn write_sweep(cfg: &BenchConfig, runs: &[SweepRun]) -> Result<PathBuf> {
    let path = cfg.output_dir.join(RESULTS_FILE);
    let rows: Vec<RunRow> = runs.iter().map(|r| r.row.clone()).collect();
    write_results(&path, &rows)?;
    if cfg.trace {
        write_traces(&cfg.output_dir.join(TRACES_FILE), runs)?;
    }
    Ok(path)
}

pub fn write_results(path: &Path, rows: &[RunRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    if rows.is_empty() {
        w.write_record([
            "problem", "method", "linesearch", "start_idx", "seed", "status", "iters", "f_evals",
            "j_evals", "wall_time_s", "theta_final", "restarts",
        ])?;
    }
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_results(path: &Path) -> Result<Vec<RunRow>> {
    let mut r = csv::Reader::from_path(path)?;
    r.deserialize().map(|row| row.map_err(Error::from)).collect()
}

fn write_traces(path: &Path, runs: &[SweepRun]) -> Result<()> {
    let mut out = std::io::BufWriter::new(fs::File::create(path)?);
    writeln!(
        out,
        "problem,method,linesearch,start_idx,k,norm_v,theta,beta,alpha,h_d,phi_decrease,restarted"
    )?;
    for run in runs {
        for (k, t) in run.record.trace.iter().enumerate() {
            let TraceEntry {
                norm_v,
                theta,
                beta,
                alpha,
                h_d,
                phi_decrease,
                restarted,
                ..
            } = t;
            writeln!(
                out,
                "{},{},{},{},{k},{norm_v:e},{theta:e},{beta:e},{alpha:e},{h_d:e},{phi_decrease:e},{restarted}",
                run.row.problem, run.row.method, run.row.linesearch, run.row.start_idx
            )?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Method specs present in a set of rows, sorted.
pub fn methods_in(rows: &[RunRow]) -> Vec<MethodSpec> {
    let mut specs: Vec<MethodSpec> = rows
        .iter()
        .filter_map(|r| format!("{}:{}", r.method, r.linesearch).parse().ok())
        .collect();
    specs.sort();
    specs.dedup();
    specs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_depend_on_every_input() {
        let a = start_seed(1, "jos1", 0);
        assert_eq!(a, start_seed(1, "jos1", 0));
        assert_ne!(a, start_seed(2, "jos1", 0));
        assert_ne!(a, start_seed(1, "sp1", 0));
        assert_ne!(a, start_seed(1, "jos1", 1));
    }

    #[test]
    fn header_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.csv");
        write_results(&path, &[]).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert_eq!(
            text.lines().next().unwrap(),
            "problem,method,linesearch,start_idx,seed,status,iters,f_evals,j_evals,wall_time_s,theta_final,restarts"
        );
    }
}
