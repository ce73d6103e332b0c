//! SVG rendering of performance profiles.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::config::Measurement;
use super::profile::{profiles_to_tsv, Profile, ProfileSet};
use crate::error::{Error, Result};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 64.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 56.0;

const COLORS: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

struct Frame {
    log_tau_max: f64,
}

impl Frame {
    fn x(&self, tau: f64) -> f64 {
        LEFT + (WIDTH - LEFT - RIGHT) * tau.log2() / self.log_tau_max
    }

    fn y(&self, rho: f64) -> f64 {
        HEIGHT - BOTTOM - (HEIGHT - TOP - BOTTOM) * rho
    }
}

/// Vertices of the step function, from `tau = 1` to the right edge.
pub fn step_points(profile: &Profile, tau_end: f64) -> Vec<(f64, f64)> {
    let mut pts = Vec::with_capacity(2 * profile.breakpoints.len() + 1);
    for &(tau, rho) in &profile.breakpoints {
        if let Some(&(_, prev)) = pts.last() {
            pts.push((tau, prev));
        }
        pts.push((tau, rho));
    }
    if let Some(&(_, last)) = pts.last() {
        pts.push((tau_end, last));
    }
    pts
}

/// Renders the profiles as an SVG document.
pub fn render_svg(set: &ProfileSet, measurement: Measurement) -> String {
    let tau_end = set.tau_max.max(2.0);
    let frame = Frame {
        log_tau_max: tau_end.log2(),
    };
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="14">Performance profile: {} ({} problems)</text>"#,
        (LEFT + WIDTH - RIGHT) / 2.0,
        measurement.title(),
        set.num_problems
    );

    // axes and grid
    let (x0, x1) = (frame.x(1.0), frame.x(tau_end));
    let (y0, y1) = (frame.y(0.0), frame.y(1.0));
    for i in 0..=10 {
        let rho = f64::from(i) / 10.0;
        let y = frame.y(rho);
        let _ = writeln!(s, r##"<line x1="{x0:.2}" y1="{y:.2}" x2="{x1:.2}" y2="{y:.2}" stroke="#e0e0e0"/>"##);
        if i % 2 == 0 {
            let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{rho:.1}</text>"#, x0 - 6.0, y + 4.0);
        }
    }
    let ticks = frame.log_tau_max.ceil() as i32;
    let stride = (ticks / 10).max(1);
    for k in (0..=ticks).step_by(stride as usize) {
        let tau = 2f64.powi(k);
        if tau > tau_end * (1.0 + 1e-12) {
            break;
        }
        let x = frame.x(tau);
        let _ = writeln!(s, r##"<line x1="{x:.2}" y1="{y0:.2}" x2="{x:.2}" y2="{:.2}" stroke="#888"/>"##, y0 + 5.0);
        let _ = writeln!(s, r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">2^{k}</text>"#, y0 + 18.0);
    }
    let _ = writeln!(
        s,
        r##"<polyline points="{x0:.2},{y1:.2} {x0:.2},{y0:.2} {x1:.2},{y0:.2} {x1:.2},{y1:.2}" fill="none" stroke="#333"/>"##
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">τ (log₂ scale)</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">ρ(τ)</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0
    );

    for (i, p) in set.profiles.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let points: Vec<String> = step_points(p, tau_end)
            .into_iter()
            .map(|(t, r)| format!("{:.2},{:.2}", frame.x(t), frame.y(r)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline class="profile" data-solver="{}" points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
            escape(&p.solver),
            points.join(" ")
        );
        // robustness readout on the right axis
        let robust = p.robustness();
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" fill="{color}">{robust:.3}</text>"#,
            x1 + 4.0,
            frame.y(robust) + 4.0
        );
        let ly = TOP + 20.0 * i as f64 + 10.0;
        let lx = WIDTH - RIGHT + 50.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/><text x="{:.2}" y="{:.2}">{}</text>"#,
            lx + 18.0,
            lx + 22.0,
            ly + 4.0,
            escape(&p.solver)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Writes the SVG to `path` and the breakpoints to the same path with a `.tsv`
/// extension. Returns the TSV path.
pub fn emit_profile_plot(set: &ProfileSet, measurement: Measurement, path: &Path) -> Result<PathBuf> {
    if set.profiles.is_empty() {
        return Err(Error::Config("no profiles to plot".into()));
    }
    let io = |e: std::io::Error, p: &Path| Error::Io(format!("{}: {e}", p.display()));
    std::fs::write(path, render_svg(set, measurement)).map_err(|e| io(e, path))?;
    let tsv = path.with_extension("tsv");
    std::fs::write(&tsv, profiles_to_tsv(set)).map_err(|e| io(e, &tsv))?;
    Ok(tsv)
}

/// `profile_<measure>.svg` inside `dir`.
pub fn profile_path(dir: &Path, measurement: Measurement) -> PathBuf {
    dir.join(format!("profile_{}.svg", measurement.id()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::profile::{performance_profile, ProfileTable};

    fn set(t: Vec<Vec<Option<f64>>>) -> ProfileSet {
        let solvers = (0..t[0].len()).map(|s| format!("s{s}")).collect();
        let ids = (0..t.len()).map(|p| format!("p{p}")).collect();
        performance_profile(&ProfileTable::new(solvers, ids, t).unwrap()).unwrap()
    }

    #[test]
    fn single_solver_is_flat_at_one() {
        let set = set(vec![vec![Some(2.0)], vec![Some(5.0)]]);
        let pts = step_points(&set.profiles[0], 2.0);
        assert_eq!(pts, vec![(1.0, 1.0), (2.0, 1.0)]);
        let svg = render_svg(&set, Measurement::Iters);
        assert_eq!(svg.matches("class=\"profile\"").count(), 1);
    }

    #[test]
    fn crossing_pair_steps() {
        let set = set(vec![vec![Some(1.0), Some(2.0)], vec![Some(2.0), Some(1.0)]]);
        for p in &set.profiles {
            assert_eq!(
                step_points(p, 2.0),
                vec![(1.0, 0.5), (2.0, 0.5), (2.0, 1.0), (2.0, 1.0)]
            );
        }
    }

    #[test]
    fn writes_svg_and_tsv() {
        let dir = tempfile::tempdir().unwrap();
        let set = set(vec![vec![Some(1.0), None]]);
        let path = profile_path(dir.path(), Measurement::FEvals);
        let tsv = emit_profile_plot(&set, Measurement::FEvals, &path).unwrap();
        assert!(path.ends_with("profile_fevals.svg"));
        assert!(std::fs::read_to_string(&path).unwrap().starts_with("<svg"));
        assert!(std::fs::read_to_string(tsv).unwrap().starts_with("# s0\ntau\trho\n"));
        let missing = dir.path().join("no/such/dir/p.svg");
        assert!(emit_profile_plot(&set, Measurement::FEvals, &missing).is_err());
    }
}
