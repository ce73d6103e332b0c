//! Benchmark sweeps over methods, problems and seeded starts, with
//! performance profiles of the results.

mod config;
mod plot;
mod profile;
mod sweep;

use std::path::{Path, PathBuf};

pub use config::{
    parse_config, read_config_file, solver_label, Aggregate, BenchConfig, Measurement, MethodSpec,
};
pub use plot::{emit_profile_plot, profile_path, render_svg, step_points};
pub use profile::{
    build_table, measure, parse_profiles_tsv, performance_profile, profiles_to_tsv, Profile,
    ProfileSet, ProfileTable,
};
pub use sweep::{
    methods_in, prepare_output_dir, read_results, row_from_record, run_suite, run_sweep,
    start_seed, write_results, write_sweep, RunRow, SweepRun, RESULTS_FILE, TRACES_FILE,
};

use crate::error::Result;

/// Profiles `rows` under each measurement and writes one SVG and TSV pair per
/// measurement into `dir`. Returns the SVG paths alongside the profiles.
pub fn emit_profiles(
    rows: &[RunRow],
    measurements: &[Measurement],
    aggregate: Aggregate,
    dir: &Path,
) -> Result<Vec<(Measurement, PathBuf, ProfileSet)>> {
    prepare_output_dir(dir)?;
    measurements
        .iter()
        .map(|&m| {
            let set = performance_profile(&build_table(rows, m, aggregate)?)?;
            let path = profile_path(dir, m);
            emit_profile_plot(&set, m, &path)?;
            Ok((m, path, set))
        })
        .collect()
}
