//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if a criterion fails that is not listed in `KNOWN_RED`.
//!
//! Oracles here are computed independently of the library: grid searches,
//! hand-derived intervals, finite differences and direct re-evaluation of the
//! objective along recorded iterates.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vecopt::bench::{
    build_table, emit_profiles, parse_profiles_tsv, performance_profile, profiles_to_tsv,
    read_results, run_suite, start_seed, Aggregate, BenchConfig, Measurement, MethodSpec,
    ProfileTable, RunRow,
};
use vecopt::directions::{beta_mprp, DirectionMethod};
use vecopt::linesearch::{search, verify_conditions, LineSearchKind, LineSearchParams};
use vecopt::problems::{sample_start, suite, EvalCounters, FnProblem, SharedProblem};
use vecopt::subproblem::steepest_direction_default;
use vecopt::{solve, ConeOrder, Matrix, RunRecord, SolverOptions};

/// Criteria expected to fail, with the reason recorded alongside the build.
const KNOWN_RED: &[(u32, &str)] = &[
    (
        2,
        "the descent bound is attained with equality, so when |h(x,v)| is large (quad_ill reaches \
         about 5e4) roundoff of one ulp exceeds the absolute 1e-12 allowance; relative margins stay \
         below 1e-15",
    ),
    (
        6,
        "the gradient-form scalar coefficient is not an algebraic reduction of the vector MPRP \
         coefficient for n >= 2; the two agree only for one-dimensional decision variables",
    ),
];

struct Outcome {
    id: u32,
    name: &'static str,
    pass: bool,
    detail: String,
}

fn main() {
    let criteria: Vec<(u32, &'static str, fn() -> (bool, String))> = vec![
        (1, "subproblem oracle equivalence", c1_subproblem),
        (2, "sufficient descent", c2_sufficient_descent),
        (3, "beta nonnegativity", c3_beta_nonnegative),
        (4, "line-search contracts", c4_linesearch),
        (5, "convergence on convex problems", c5_convergence),
        (6, "scalar reduction", c6_scalar_reduction),
        (7, "jacobian consistency", c7_jacobians),
        (8, "profile correctness", c8_profiles),
        (9, "desk benchmark", c9_benchmark),
    ];
    let mut outcomes = Vec::new();
    for (id, name, run) in criteria {
        let started = Instant::now();
        let (pass, detail) = run();
        let line = format!(
            "{} criterion {id} ({name}): {detail} [{:.1}s]",
            if pass { "PASS" } else { "FAIL" },
            started.elapsed().as_secs_f64()
        );
        println!("{line}");
        outcomes.push(Outcome { id, name, pass, detail });
    }

    let mut unexpected = Vec::new();
    for o in &outcomes {
        let known = KNOWN_RED.iter().find(|(id, _)| *id == o.id);
        match (o.pass, known) {
            (false, Some((_, why))) => println!("note: criterion {} is a known failure: {why}", o.id),
            (false, None) => unexpected.push(format!("{} ({}): {}", o.id, o.name, o.detail)),
            (true, Some(_)) => println!("note: criterion {} passed although listed as known red", o.id),
            (true, None) => {}
        }
    }
    let passed = outcomes.iter().filter(|o| o.pass).count();
    println!("{passed}/{} criteria passed", outcomes.len());
    if !unexpected.is_empty() {
        eprintln!("unexpected failures:\n  {}", unexpected.join("\n  "));
        std::process::exit(1);
    }
}

fn fmt_fail(failures: &[String]) -> String {
    failures.iter().take(3).cloned().collect::<Vec<_>>().join("; ")
}

// ---------------------------------------------------------------- criterion 1

/// `1/2 |sum_j l_j g_j|^2` through the Gram matrix.
fn dual_value(gram: &[Vec<f64>], l: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..l.len() {
        for j in 0..l.len() {
            s += l[i] * gram[i][j] * l[j];
        }
    }
    0.5 * s
}

/// Minimum of the dual over the simplex: a grid with step 1e-3, then local
/// grids around the incumbent down to step 1e-6.
fn grid_dual(g: &[Vec<f64>]) -> f64 {
    let q = g.len();
    let gram: Vec<Vec<f64>> = (0..q)
        .map(|i| (0..q).map(|j| g[i].iter().zip(&g[j]).map(|(a, b)| a * b).sum()).collect())
        .collect();
    match q {
        1 => dual_value(&gram, &[1.0]),
        2 => {
            let eval = |a: f64| dual_value(&gram, &[a, 1.0 - a]);
            let mut best = (f64::INFINITY, 0.0);
            for k in 0..=1000 {
                let a = k as f64 * 1e-3;
                best = lower(best, (eval(a), a));
            }
            for step in [1e-4, 1e-5, 1e-6] {
                loop {
                    let centre = best.1;
                    for k in -20..=20 {
                        let a = (centre + k as f64 * step).clamp(0.0, 1.0);
                        best = lower(best, (eval(a), a));
                    }
                    if best.1 == centre {
                        break;
                    }
                }
            }
            best.0
        }
        3 => {
            let eval = |a: f64, b: f64| dual_value(&gram, &[a, b, 1.0 - a - b]);
            let mut best = (f64::INFINITY, (0.0, 0.0));
            for i in 0..=1000 {
                for j in 0..=(1000 - i) {
                    let (a, b) = (i as f64 * 1e-3, j as f64 * 1e-3);
                    let v = eval(a, b);
                    if v < best.0 {
                        best = (v, (a, b));
                    }
                }
            }
            for step in [1e-4, 1e-5, 1e-6] {
                loop {
                    let centre = best.1;
                    for i in -20..=20 {
                        for j in -20..=20 {
                            let a = (centre.0 + i as f64 * step).max(0.0);
                            let b = (centre.1 + j as f64 * step).max(0.0);
                            if a + b > 1.0 {
                                continue;
                            }
                            let v = eval(a, b);
                            if v < best.0 {
                                best = (v, (a, b));
                            }
                        }
                    }
                    if best.1 == centre {
                        break;
                    }
                }
            }
            best.0
        }
        _ => unreachable!("at most three objectives"),
    }
}

fn lower(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    if b.0 < a.0 {
        b
    } else {
        a
    }
}

fn c1_subproblem() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let started = Instant::now();
    let (mut worst_theta, mut worst_inv) = (0.0f64, 0.0f64);
    let mut failures = Vec::new();
    for case in 0..500 {
        let m = rng.random_range(1..=3usize);
        let n = rng.random_range(1..=4usize);
        let rows: Vec<Vec<f64>> = (0..m)
            .map(|_| (0..n).map(|_| rng.random_range(-5.0..=5.0)).collect())
            .collect();
        let j = Matrix::from_rows(&rows).unwrap();
        let cone = ConeOrder::nonneg_orthant(m).unwrap();
        let r = match steepest_direction_default(&j, &cone) {
            Ok(r) => r,
            Err(e) => {
                failures.push(format!("case {case}: {e}"));
                continue;
            }
        };
        let oracle = -grid_dual(&rows);
        let d_theta = (r.theta - oracle).abs();
        // h recomputed from the Jacobian as max_j (J v)_j
        let h = rows
            .iter()
            .map(|g| g.iter().zip(&r.v).map(|(a, b)| a * b).sum::<f64>())
            .fold(f64::NEG_INFINITY, f64::max);
        let vv: f64 = r.v.iter().map(|x| x * x).sum();
        let d_inv = (h + 0.5 * vv - r.theta).abs();
        worst_theta = worst_theta.max(d_theta);
        worst_inv = worst_inv.max(d_inv);
        if d_theta > 1e-6 || d_inv > 1e-10 {
            failures.push(format!("case {case}: |dtheta|={d_theta:.2e} |dinv|={d_inv:.2e}"));
        }
    }
    let elapsed = started.elapsed();
    let pass = failures.is_empty() && elapsed < Duration::from_secs(10);
    (
        pass,
        format!(
            "500 cases, max |theta - grid| = {worst_theta:.2e} (tol 1e-6), max invariant error = {worst_inv:.2e} (tol 1e-10), {:.2}s (limit 10s){}",
            elapsed.as_secs_f64(),
            if failures.is_empty() { String::new() } else { format!("; {}", fmt_fail(&failures)) }
        ),
    )
}

// ------------------------------------------------------------ criteria 2 to 4

fn h_of(j: &Matrix, d: &[f64]) -> f64 {
    (0..j.rows())
        .map(|i| j.row(i).iter().zip(d).map(|(a, b)| a * b).sum::<f64>())
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Traced runs of `spec` on every suite problem from 20 seeded starts.
fn traced_runs(spec: MethodSpec) -> Vec<(SharedProblem, RunRecord)> {
    let mut out = Vec::new();
    for p in suite() {
        for idx in 0..20 {
            let x0 = sample_start(p.as_ref(), start_seed(0, p.name(), idx));
            let opts = SolverOptions::new(spec.method, spec.linesearch);
            let rec = solve(p.as_ref(), &x0, &opts).expect("valid run");
            out.push((p.clone(), rec));
        }
    }
    out
}

fn mprp_specs() -> [MethodSpec; 2] {
    [
        MethodSpec::new(DirectionMethod::Mprp, LineSearchKind::Wolfe),
        MethodSpec::new(DirectionMethod::Mprp, LineSearchKind::Armijo),
    ]
}

fn c2_sufficient_descent() -> (bool, String) {
    let c = 1.0 - 2.0 / 2.4;
    let (mut steps, mut violations, mut worst) = (0usize, Vec::new(), f64::NEG_INFINITY);
    let mut worst_rel = f64::NEG_INFINITY;
    for spec in mprp_specs() {
        for (p, rec) in traced_runs(spec) {
            for (k, t) in rec.trace.iter().enumerate() {
                steps += 1;
                let h_d = h_of(&p.jacobian(&t.x), &t.d);
                let margin = h_d - c * t.h_v;
                worst = worst.max(margin);
                worst_rel = worst_rel.max(margin / t.h_v.abs());
                if margin > 1e-12 {
                    violations.push(format!("{} {} k={k}: margin {margin:.2e}", p.name(), spec));
                }
            }
        }
    }
    (
        violations.is_empty(),
        format!(
            "{steps} MPRP steps (Wolfe and Armijo, 13 problems x 20 starts), {} violations of the 1e-12 allowance, worst h(d) - h(v)/6 = {worst:.2e}, worst relative to |h(v)| = {worst_rel:.2e}{}",
            violations.len(),
            if violations.is_empty() { String::new() } else { format!("; {}", fmt_fail(&violations)) }
        ),
    )
}

fn c3_beta_nonnegative() -> (bool, String) {
    let mut report = Vec::new();
    let mut bad = Vec::new();
    let specs = [
        mprp_specs()[0],
        mprp_specs()[1],
        MethodSpec::new(DirectionMethod::PrpPlus, LineSearchKind::StrongWolfe),
    ];
    for spec in specs {
        let mut steps = 0;
        let mut min_beta = f64::INFINITY;
        for (p, rec) in traced_runs(spec) {
            for (k, t) in rec.trace.iter().enumerate() {
                steps += 1;
                min_beta = min_beta.min(t.beta);
                if !(t.beta >= 0.0) {
                    bad.push(format!("{} {spec} k={k}: beta {}", p.name(), t.beta));
                }
            }
        }
        report.push(format!("{spec}: {steps} steps, min beta {min_beta:.3e}"));
    }
    (
        bad.is_empty(),
        format!("{}; {} negative{}", report.join(", "), bad.len(), if bad.is_empty() { String::new() } else { format!("; {}", fmt_fail(&bad)) }),
    )
}

fn half_square() -> FnProblem {
    FnProblem::new(
        "half_square",
        1,
        vec![-2.0],
        vec![2.0],
        |x| vec![0.5 * x[0] * x[0]],
        |x| Matrix::from_rows(&[vec![x[0]]]).unwrap(),
    )
    .unwrap()
}

fn c4_linesearch() -> (bool, String) {
    let mut failures = Vec::new();

    // every accepted step of traced runs, re-evaluated from scratch
    let params = LineSearchParams::default();
    let mut checked = 0usize;
    let specs = [
        mprp_specs()[0],
        mprp_specs()[1],
        MethodSpec::new(DirectionMethod::Prp, LineSearchKind::StrongWolfe),
        MethodSpec::new(DirectionMethod::PrpPlus, LineSearchKind::StrongWolfe),
    ];
    for spec in specs {
        for (p, rec) in traced_runs(spec) {
            let cone = ConeOrder::nonneg_orthant(p.m()).unwrap();
            for (k, t) in rec.trace.iter().enumerate() {
                let x_new: Vec<f64> = t.x.iter().zip(&t.d).map(|(x, d)| x + t.alpha * d).collect();
                let f_x = p.eval(&t.x);
                let f_new = p.eval(&x_new);
                let h_xd = h_of(&p.jacobian(&t.x), &t.d);
                let h_new_d = h_of(&p.jacobian(&x_new), &t.d);
                checked += 1;
                let ok = verify_conditions(
                    spec.linesearch,
                    &f_x,
                    &f_new,
                    h_xd,
                    Some(h_new_d),
                    t.alpha,
                    params.rho,
                    params.sigma,
                    &cone,
                );
                if !ok {
                    failures.push(format!("{} {spec} k={k} alpha={}", p.name(), t.alpha));
                }
            }
        }
    }

    // F(x) = x^2/2, x = 1, d = -1, rho = 0.1, sigma = 0.4:
    // (wolfe1) holds iff alpha <= 1.8, (wolfe2) iff alpha >= 0.6, strong iff |1 - alpha| <= 0.4
    let p = half_square();
    let cone = ConeOrder::nonneg_orthant(1).unwrap();
    let params = LineSearchParams {
        rho: 0.1,
        sigma: 0.4,
        ..LineSearchParams::default()
    };
    let intervals = [(LineSearchKind::Wolfe, 0.6, 1.8), (LineSearchKind::StrongWolfe, 0.6, 1.4)];
    for (kind, lo, hi) in intervals {
        let mut counters = EvalCounters::default();
        match search(kind, &p, &cone, &[1.0], &[0.5], &[-1.0], -1.0, &params, &mut counters) {
            Ok(step) if step.alpha >= lo && step.alpha <= hi => {}
            Ok(step) => failures.push(format!("{kind} returned alpha {} outside [{lo}, {hi}]", step.alpha)),
            Err(e) => failures.push(format!("{kind}: {e}")),
        }
        for k in 1..=2500 {
            let alpha = k as f64 / 1000.0;
            if alpha == lo || alpha == hi {
                continue;
            }
            let x = 1.0 - alpha;
            let ok = verify_conditions(kind, &[0.5], &[0.5 * x * x], -1.0, Some(-x), alpha, 0.1, 0.4, &cone);
            if ok != (alpha > lo && alpha < hi) {
                failures.push(format!("{kind} misclassifies alpha {alpha}"));
            }
        }
    }
    (
        failures.is_empty(),
        format!(
            "{checked} accepted steps re-verified, scalar Wolfe [0.6, 1.8] and strong Wolfe [0.6, 1.4] intervals reproduced, {} failures{}",
            failures.len(),
            if failures.is_empty() { String::new() } else { format!("; {}", fmt_fail(&failures)) }
        ),
    )
}

// ---------------------------------------------------------------- criterion 5

fn convex_names() -> Vec<String> {
    suite().iter().filter(|p| p.convex()).map(|p| p.name().to_string()).collect()
}

fn solved_fraction(rows: &[RunRow], problem: &str, label: &str) -> f64 {
    let mine: Vec<&RunRow> = rows.iter().filter(|r| r.problem == problem && r.solver_label() == label).collect();
    let solved = mine.iter().filter(|r| r.converged() && r.theta_final >= -7.45e-8).count();
    solved as f64 / mine.len().max(1) as f64
}

fn c5_convergence() -> (bool, String) {
    let dir = tempfile::tempdir().unwrap();
    let cfg = BenchConfig {
        methods: mprp_specs().to_vec(),
        problems: convex_names(),
        starts_per_problem: 200,
        output_dir: dir.path().to_path_buf(),
        ..BenchConfig::default()
    };
    let started = Instant::now();
    let rows = read_results(&run_suite(&cfg).unwrap()).unwrap();
    let elapsed = started.elapsed();
    let mut worst = (1.0f64, String::new());
    let mut below = Vec::new();
    for problem in &cfg.problems {
        for spec in &cfg.methods {
            let frac = solved_fraction(&rows, problem, &spec.label());
            if frac < worst.0 {
                worst = (frac, format!("{problem} {spec}"));
            }
            if frac < 0.95 {
                below.push(format!("{problem} {spec}: {frac:.3}"));
            }
        }
    }
    let pass = below.is_empty() && elapsed < Duration::from_secs(300);
    (
        pass,
        format!(
            "{} convex problems x 2 methods x 200 starts, lowest solved fraction {:.3} ({}), need >= 0.95, {:.1}s (limit 300s){}",
            cfg.problems.len(),
            worst.0,
            worst.1,
            elapsed.as_secs_f64(),
            if below.is_empty() { String::new() } else { format!("; {}", fmt_fail(&below)) }
        ),
    )
}

// ---------------------------------------------------------------- criterion 6

fn c6_scalar_reduction() -> (bool, String) {
    let mu = 2.4;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let cone = ConeOrder::nonneg_orthant(1).unwrap();
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let dotp = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let (mut mismatches, mut worst, mut one_dim_mismatches, mut one_dim) = (0, 0.0f64, 0, 0);
    for _ in 0..1000 {
        let n = rng.random_range(1..=5usize);
        let draw = |rng: &mut ChaCha8Rng| (0..n).map(|_| rng.random_range(-3.0..3.0)).collect::<Vec<f64>>();
        let (g_prev, g, d_prev) = (draw(&mut rng), draw(&mut rng), draw(&mut rng));
        let h = |grad: &[f64], dir: &[f64]| {
            cone.h(&Matrix::from_rows(&[grad.to_vec()]).unwrap(), dir).unwrap()
        };
        let v: Vec<f64> = g.iter().map(|x| -x).collect();
        let v_prev: Vec<f64> = g_prev.iter().map(|x| -x).collect();
        let ours = beta_mprp(h(&g, &v), h(&g_prev, &v), h(&g, &d_prev), h(&g_prev, &v_prev), mu).unwrap();

        let (ng, ngp, nd) = (norm(&g), norm(&g_prev), norm(&d_prev));
        let (t1, t2) = (ngp * dotp(&g, &g), ng * dotp(&g, &g_prev));
        let denom = (mu * ngp.powi(3)).max(mu * ng * ngp * nd);
        let gradient_form = (t1 - t2) / denom;

        // relative to the size of the terms, since the difference can cancel to zero
        let scale = ours.abs().max((t1.abs() + t2.abs()) / denom);
        let rel = (ours - gradient_form).abs() / scale.max(f64::MIN_POSITIVE);
        let agree = rel <= 1e-12;
        if n == 1 {
            one_dim += 1;
            if !agree {
                one_dim_mismatches += 1;
            }
        }
        if !agree {
            mismatches += 1;
            worst = worst.max(rel);
        }
    }
    (
        mismatches == 0,
        format!(
            "{mismatches}/1000 tuples differ beyond 1e-12 relative (worst {worst:.2e}); n = 1 subset: {one_dim_mismatches}/{one_dim} differ"
        ),
    )
}

// ---------------------------------------------------------------- criterion 7

fn c7_jacobians() -> (bool, String) {
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    let mut points = 0;
    for p in suite() {
        for i in 0..100 {
            let x = sample_start(p.as_ref(), 7_000 + i);
            let j = p.jacobian(&x);
            let h = 1e-6 * (1.0 + x.iter().map(|v| v * v).sum::<f64>().sqrt());
            points += 1;
            for col in 0..p.n() {
                let (mut xp, mut xm) = (x.clone(), x.clone());
                xp[col] += h;
                xm[col] -= h;
                let (fp, fm) = (p.eval(&xp), p.eval(&xm));
                for row in 0..p.m() {
                    let fd = (fp[row] - fm[row]) / (xp[col] - xm[col]);
                    let exact = j.row(row)[col];
                    let rel = (fd - exact).abs() / exact.abs().max(1.0);
                    worst = worst.max(rel);
                    if rel > 1e-5 {
                        failures.push(format!("{} point {i} entry ({row},{col}): {exact} vs {fd}", p.name()));
                    }
                }
            }
        }
    }
    (
        failures.is_empty(),
        format!(
            "{points} points over 13 problems, worst relative error {worst:.2e} (tol 1e-5){}",
            if failures.is_empty() { String::new() } else { format!("; {}", fmt_fail(&failures)) }
        ),
    )
}

// ---------------------------------------------------------------- criterion 8

fn table(t: Vec<Vec<Option<f64>>>) -> ProfileTable {
    let solvers = (0..t[0].len()).map(|s| format!("s{s}")).collect();
    let ids = (0..t.len()).map(|p| format!("p{p}")).collect();
    ProfileTable::new(solvers, ids, t).unwrap()
}

fn c8_profiles() -> (bool, String) {
    let mut failures = Vec::new();

    // single solver, everything solved: rho = 1 from tau = 1 on
    let set = performance_profile(&table(vec![vec![Some(4.0)], vec![Some(9.0)], vec![Some(1.0)]])).unwrap();
    if [1.0, 1.5, 1e6].iter().any(|&tau| set.profiles[0].rho_at(tau) != 1.0) {
        failures.push("single solver not identically 1".to_string());
    }
    // ratios [[1, 2], [2, 1]]: rho(1) = 0.5 and rho(2) = 1 for both
    let set = performance_profile(&table(vec![vec![Some(1.0), Some(2.0)], vec![Some(2.0), Some(1.0)]])).unwrap();
    for p in &set.profiles {
        let got = (p.rho_at(1.0), p.rho_at(1.999), p.rho_at(2.0), p.rho_at(50.0));
        if got != (0.5, 0.5, 1.0, 1.0) {
            failures.push(format!("crossing pair {}: {got:?}", p.solver));
        }
    }
    // [[1, FAIL], [1, FAIL]]
    let set = performance_profile(&table(vec![vec![Some(1.0), None], vec![Some(1.0), None]])).unwrap();
    if set.profiles[0].rho_at(1.0) != 1.0 || [1.0, 1e300].iter().any(|&tau| set.profiles[1].rho_at(tau) != 0.0) {
        failures.push("failure column counted".to_string());
    }
    // an all-FAIL row is dropped from |P| and reported
    let set = performance_profile(&table(vec![vec![None, None], vec![Some(3.0), Some(6.0)]])).unwrap();
    if set.num_problems != 1 || set.dropped.len() != 1 || set.profiles[1].rho_at(2.0) != 1.0 {
        failures.push("all-FAIL row handling".to_string());
    }
    if performance_profile(&ProfileTable::new(vec![], vec![], vec![]).unwrap()).is_ok() {
        failures.push("empty table accepted".to_string());
    }

    // pipeline on a real sweep: monotone, bounded, shuffle invariant, TSV exact
    let dir = tempfile::tempdir().unwrap();
    let cfg = BenchConfig {
        methods: vec![
            MethodSpec::new(DirectionMethod::Mprp, LineSearchKind::Wolfe),
            MethodSpec::new(DirectionMethod::Fr, LineSearchKind::StrongWolfe),
            MethodSpec::new(DirectionMethod::Sd, LineSearchKind::Armijo),
        ],
        problems: vec!["jos1".into(), "ap1".into(), "ff1".into(), "vu1".into()],
        starts_per_problem: 15,
        output_dir: dir.path().to_path_buf(),
        ..BenchConfig::default()
    };
    let rows = read_results(&run_suite(&cfg).unwrap()).unwrap();
    let mut shuffled = rows.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for i in (1..shuffled.len()).rev() {
        shuffled.swap(i, rng.random_range(0..=i));
    }
    for m in Measurement::ALL {
        for agg in [Aggregate::PerRun, Aggregate::Median] {
            let a = performance_profile(&build_table(&rows, m, agg).unwrap()).unwrap();
            let b = performance_profile(&build_table(&shuffled, m, agg).unwrap()).unwrap();
            if profiles_to_tsv(&a) != profiles_to_tsv(&b) || a != b {
                failures.push(format!("{m} {agg:?}: shuffle changed the profile"));
            }
            if parse_profiles_tsv(&profiles_to_tsv(&a)).unwrap() != a.profiles {
                failures.push(format!("{m}: TSV round trip"));
            }
            for p in &a.profiles {
                let monotone = p.breakpoints.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 <= w[1].1);
                let bounded = p.breakpoints.iter().all(|&(_, r)| (0.0..=1.0).contains(&r));
                if !monotone || !bounded || p.breakpoints[0].0 != 1.0 {
                    failures.push(format!("{m} {}: not a monotone step function", p.solver));
                }
            }
            // ties share the win, so the solvers' rho(1) sum to at least one
            let wins: f64 = a.profiles.iter().map(|p| p.rho_at(1.0)).sum();
            if wins < 1.0 - 1e-12 {
                failures.push(format!("{m}: sum of rho(1) = {wins}"));
            }
            // robustness equals the solved fraction over kept rows
            for p in &a.profiles {
                if agg == Aggregate::PerRun {
                    let solved = rows.iter().filter(|r| r.solver_label() == p.solver && r.converged()).count();
                    let expect = solved as f64 / a.num_problems as f64;
                    if (p.robustness() - expect).abs() > 1e-15 {
                        failures.push(format!("{m} {}: robustness {} vs {expect}", p.solver, p.robustness()));
                    }
                }
            }
        }
    }
    (
        failures.is_empty(),
        format!(
            "hand tables, failure handling, monotonicity, shuffle invariance over {} rows and TSV round trip: {} failures{}",
            rows.len(),
            failures.len(),
            if failures.is_empty() { String::new() } else { format!("; {}", fmt_fail(&failures)) }
        ),
    )
}

// ---------------------------------------------------------------- criterion 9

fn c9_benchmark() -> (bool, String) {
    let dir = tempfile::tempdir().unwrap();
    let cfg = BenchConfig {
        output_dir: dir.path().to_path_buf(),
        ..BenchConfig::default()
    };
    let mut failures = Vec::new();
    if cfg.methods.len() < 5 || cfg.problems.len() < 10 || cfg.starts_per_problem != 200 || cfg.solver.max_iters > 5000 {
        failures.push("configuration below protocol size".to_string());
    }
    let rows = read_results(&run_suite(&cfg).unwrap()).unwrap();
    let expected_rows = cfg.methods.len() * cfg.problems.len() * 200;
    if rows.len() != expected_rows {
        failures.push(format!("{} rows, expected {expected_rows}", rows.len()));
    }
    let emitted = emit_profiles(&rows, &Measurement::ALL, Aggregate::PerRun, dir.path()).unwrap();
    for (m, path, _) in &emitted {
        let ok = std::fs::read_to_string(path).map(|s| s.starts_with("<svg")).unwrap_or(false);
        if !ok {
            failures.push(format!("missing {m} SVG"));
        }
    }

    let convex = convex_names();
    let convex_rows: Vec<RunRow> = rows.iter().filter(|r| convex.contains(&r.problem)).cloned().collect();
    let set = performance_profile(&build_table(&convex_rows, Measurement::Iters, Aggregate::PerRun).unwrap()).unwrap();
    let robustness: BTreeMap<String, f64> = set.profiles.iter().map(|p| (p.solver.clone(), p.robustness())).collect();
    let reference = robustness["mprp/wolfe"];
    for (solver, r) in &robustness {
        if *r > reference {
            failures.push(format!("{solver} robustness {r:.4} exceeds mprp/wolfe {reference:.4}"));
        }
    }
    let summary = robustness
        .iter()
        .map(|(s, r)| format!("{s} {r:.4}"))
        .collect::<Vec<_>>()
        .join(", ");
    (
        failures.is_empty(),
        format!(
            "{} runs ({} methods x {} problems x 200 starts), {} SVGs; convex robustness: {summary}{}",
            rows.len(),
            cfg.methods.len(),
            cfg.problems.len(),
            emitted.len(),
            if failures.is_empty() { String::new() } else { format!("; {}", fmt_fail(&failures)) }
        ),
    )
}
