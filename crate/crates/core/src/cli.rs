//! Command-line front end: `list`, `solve`, `run` and `profile`.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::bench::{
    emit_profiles, prepare_output_dir, read_config_file, read_results, run_sweep, write_sweep,
    Aggregate, BenchConfig, Measurement, MethodSpec, RunRow,
};
use crate::directions::DirectionMethod;
use crate::error::{Error, Result};
use crate::linesearch::LineSearchKind;
use crate::problems::{find_problem, sample_start, suite};
use crate::solver::{solve, RunStatus, SolverOptions};

#[derive(Debug, Parser)]
#[command(name = "vecopt", version, about = "Conjugate gradient methods for vector optimization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List test problems, direction methods and line searches.
    List,
    /// Solve one problem from one starting point and print the iteration trace.
    Solve(SolveArgs),
    /// Sweep methods x problems x starts, write results.csv and profiles.
    Run(RunArgs),
    /// Compute performance profiles from a results CSV.
    Profile(ProfileArgs),
}

/// Solver settings shared by `solve` and `run`.
#[derive(Debug, Args, Default)]
struct SolverFlags {
    /// Sufficient decrease constant.
    #[arg(long)]
    rho: Option<String>,
    /// Curvature constant.
    #[arg(long)]
    sigma: Option<String>,
    /// Armijo backtracking factor.
    #[arg(long)]
    delta: Option<String>,
    /// Largest trial step for the Wolfe searches.
    #[arg(long)]
    alpha_max: Option<String>,
    /// Trial budget per line search.
    #[arg(long)]
    max_trials: Option<String>,
    /// MPRP parameter, must exceed 2.
    #[arg(long)]
    mu: Option<String>,
    /// Iteration cap.
    #[arg(long)]
    max_iters: Option<String>,
    /// Stop once theta(x) >= -tol.
    #[arg(long)]
    tol: Option<String>,
}

impl SolverFlags {
    fn pairs(&self) -> Vec<(&'static str, &String)> {
        [
            ("rho", &self.rho),
            ("sigma", &self.sigma),
            ("delta", &self.delta),
            ("alpha_max", &self.alpha_max),
            ("max_trials", &self.max_trials),
            ("mu", &self.mu),
            ("max_iters", &self.max_iters),
            ("tol", &self.tol),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.as_ref().map(|v| (k, v)))
        .collect()
    }
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[arg(long)]
    problem: String,
    #[arg(long, default_value = "mprp")]
    method: String,
    #[arg(long, default_value = "wolfe")]
    linesearch: String,
    /// Seed for the random starting point.
    #[arg(long, default_value_t = 0, conflicts_with = "x0")]
    seed: u64,
    /// Explicit starting point, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    x0: Option<String>,
    /// Print only the summary.
    #[arg(long)]
    quiet: bool,
    #[command(flatten)]
    solver: SolverFlags,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// `key = value` file; flags given on the command line take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma list of `method:linesearch` specs.
    #[arg(long)]
    methods: Option<String>,
    /// Comma list of problem names, or `all`.
    #[arg(long)]
    problems: Option<String>,
    #[arg(long)]
    starts: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    out: Option<String>,
    /// Comma list of iters, time, fevals, jevals, or `all`.
    #[arg(long)]
    measure: Option<String>,
    /// `per-run` or `median`.
    #[arg(long)]
    aggregate: Option<String>,
    /// Also write per-iteration traces.
    #[arg(long)]
    trace: bool,
    #[command(flatten)]
    solver: SolverFlags,
}

#[derive(Debug, Args)]
struct ProfileArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value = "all")]
    measure: String,
    /// Output directory; defaults to the directory holding the input.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "per-run")]
    aggregate: String,
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn cli_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    run_cli(args, &mut stdout.lock())
}

/// Like [`cli_main`] but writes normal output to `out`. Diagnostics go to
/// stderr.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = write!(out, "{e}");
            return 0;
        }
        Err(e) => {
            let _ = e.print();
            return 2;
        }
    };
    let result = match cli.command {
        Command::List => cmd_list(out),
        Command::Solve(a) => cmd_solve(&a, out),
        Command::Run(a) => cmd_run(&a, out),
        Command::Profile(a) => cmd_profile(&a, out),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", one_line(&e.to_string()));
            1
        }
    }
}

fn one_line(msg: &str) -> String {
    msg.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn cmd_list(out: &mut dyn Write) -> Result<()> {
    writeln!(out, "problems:")?;
    for p in suite() {
        let kind = if p.convex() { "convex" } else { "nonconvex" };
        writeln!(out, "  {:<12} n={:<4} m={} {kind}", p.name(), p.n(), p.m())?;
    }
    writeln!(out, "methods:")?;
    for m in DirectionMethod::ALL {
        writeln!(out, "  {m}")?;
    }
    writeln!(out, "linesearches:")?;
    for ls in LineSearchKind::ALL {
        writeln!(out, "  {ls}")?;
    }
    Ok(())
}

fn solver_options(flags: &SolverFlags) -> Result<SolverOptions> {
    let mut cfg = BenchConfig {
        solver: SolverOptions::default(),
        ..BenchConfig::default()
    };
    for (k, v) in flags.pairs() {
        cfg.set(k, v)?;
    }
    Ok(cfg.solver)
}

fn cmd_solve(a: &SolveArgs, out: &mut dyn Write) -> Result<()> {
    let problem = find_problem(&a.problem)?;
    let mut opts = solver_options(&a.solver)?;
    opts.method = a.method.parse()?;
    opts.linesearch = a.linesearch.parse()?;
    let x0 = match &a.x0 {
        Some(text) => text
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Config(format!("x0: bad number `{}`", t.trim())))
            })
            .collect::<Result<Vec<_>>>()?,
        None => sample_start(problem.as_ref(), a.seed),
    };
    let rec = solve(problem.as_ref(), &x0, &opts)?;

    if !a.quiet {
        writeln!(
            out,
            "{:>5} {:>12} {:>12} {:>12} {:>11} {:>12} {:>3}",
            "k", "theta", "|v|", "beta", "alpha", "h(x,d)", "rs"
        )?;
        for (k, t) in rec.trace.iter().enumerate() {
            writeln!(
                out,
                "{k:>5} {:>12.4e} {:>12.4e} {:>12.4e} {:>11.3e} {:>12.4e} {:>3}",
                t.theta,
                t.norm_v,
                t.beta,
                t.alpha,
                t.h_d,
                if t.restarted { "*" } else { "" }
            )?;
        }
    }
    writeln!(out, "problem     {}", rec.problem)?;
    writeln!(out, "method      {}/{}", rec.method, rec.linesearch)?;
    writeln!(out, "status      {}", rec.status)?;
    if let Some(msg) = &rec.message {
        writeln!(out, "message     {}", one_line(msg))?;
    }
    writeln!(out, "iters       {}", rec.iters)?;
    writeln!(out, "f_evals     {}", rec.f_evals)?;
    writeln!(out, "j_evals     {}", rec.j_evals)?;
    writeln!(out, "restarts    {}", rec.restarts)?;
    writeln!(out, "theta_final {:e}", rec.theta_final)?;
    writeln!(out, "F(x)        {:?}", rec.f_final)?;
    Ok(())
}

fn cmd_run(a: &RunArgs, out: &mut dyn Write) -> Result<()> {
    let mut pairs: BTreeMap<String, String> = match &a.config {
        Some(path) => read_config_file(path)?,
        None => BTreeMap::new(),
    };
    let flags = [
        ("methods", &a.methods),
        ("problems", &a.problems),
        ("starts", &a.starts),
        ("seed", &a.seed),
        ("out", &a.out),
        ("measure", &a.measure),
        ("aggregate", &a.aggregate),
    ];
    for (k, v) in flags {
        if let Some(v) = v {
            pairs.insert(k.to_string(), v.clone());
        }
    }
    for (k, v) in a.solver.pairs() {
        pairs.insert(k.to_string(), v.clone());
    }
    if a.trace {
        pairs.insert("trace".into(), "true".into());
    }
    let cfg = BenchConfig::from_pairs(&pairs)?;
    // fail on an unwritable directory before spending time on runs
    prepare_output_dir(&cfg.output_dir)?;

    let runs = run_sweep(&cfg)?;
    let results = write_sweep(&cfg, &runs)?;
    let rows: Vec<RunRow> = runs.into_iter().map(|r| r.row).collect();
    writeln!(out, "wrote {} runs to {}", rows.len(), results.display())?;
    summarize(&rows, &cfg.methods, out)?;
    let emitted = emit_profiles(&rows, &cfg.measurements, cfg.aggregate, &cfg.output_dir)?;
    for (_, path, _) in emitted {
        writeln!(out, "wrote {}", path.display())?;
    }
    Ok(())
}

fn summarize(rows: &[RunRow], methods: &[MethodSpec], out: &mut dyn Write) -> Result<()> {
    writeln!(out, "{:<24} {:>8} {:>8} {:>10}", "solver", "runs", "solved", "fraction")?;
    for spec in methods {
        let label = spec.label();
        let mine: Vec<&RunRow> = rows.iter().filter(|r| r.solver_label() == label).collect();
        let solved = mine.iter().filter(|r| r.status == RunStatus::Converged.as_str()).count();
        let frac = solved as f64 / mine.len().max(1) as f64;
        writeln!(out, "{label:<24} {:>8} {solved:>8} {frac:>10.4}", mine.len())?;
    }
    Ok(())
}

fn cmd_profile(a: &ProfileArgs, out: &mut dyn Write) -> Result<()> {
    let measurements = Measurement::parse_list(&a.measure)?;
    let aggregate: Aggregate = a.aggregate.parse()?;
    let rows = read_results(&a.input)?;
    let dir = match &a.out {
        Some(dir) => dir.clone(),
        None => a
            .input
            .parent()
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from(".")),
    };
    for (m, path, set) in emit_profiles(&rows, &measurements, aggregate, &dir)? {
        writeln!(out, "{} ({} problems, {} dropped): {}", m, set.num_problems, set.dropped.len(), path.display())?;
        for p in &set.profiles {
            writeln!(out, "  {:<24} rho(1)={:.4} robustness={:.4}", p.solver, p.rho_at(1.0), p.robustness())?;
        }
    }
    Ok(())
}
