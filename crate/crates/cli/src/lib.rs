//! Quench experiments on the mixed-field Ising chain: configuration,
//! observable evaluation, time-series output and post-run analysis.

pub mod analysis;
pub mod config;
pub mod error;
pub mod observables;
pub mod run;
pub mod series;
pub mod svg;

pub use analysis::{
    analyze, default_window, detect_extrema, detect_zero_intervals, majorization_monotonicity_report, Extremum,
    ExtremumKind, MajorizationReport,
};
pub use config::{ObservableSpec, ParamsSpec, PolicySpec, QuenchConfig};
pub use error::{CliError, CliResult};
pub use run::{oracle_compare, run_quench, run_quench_with, OracleReport, RunOutput, Snapshot};
pub use series::{emit_csv, read_csv, TimeSeries};
pub use svg::{emit_svg, render_svg};
