use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::info;
use quench_cli::run::ground_report;
use quench_cli::{analyze, emit_csv, emit_svg, oracle_compare, read_csv, run_quench, CliError, CliResult};
use quench_cli::{ParamsSpec, QuenchConfig};
use quench_core::mps::TruncationPolicy;
use serde::Serialize;

/// Quench dynamics of the mixed-field Ising chain.
#[derive(Parser)]
#[command(name = "quench", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ground state energy and bond entropies.
    Ground(GroundArgs),
    /// Run a quench from a JSON config and write CSV, SVG and a `.summary.json` summary.
    Quench(QuenchArgs),
    /// Compare the engine with exact evolution (N <= 10) and print a JSON report.
    OracleCompare(OracleArgs),
    /// Extrema, periods, zero intervals and majorization of a CSV time series.
    Analyze(AnalyzeArgs),
}

#[derive(Args)]
struct GroundArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, allow_hyphen_values = true)]
    j: f64,
    #[arg(long, allow_hyphen_values = true)]
    hx: f64,
    #[arg(long, allow_hyphen_values = true)]
    hz: f64,
    #[arg(long, default_value_t = 1e-9)]
    cutoff: f64,
    #[arg(long, default_value_t = 50)]
    chi_max: usize,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct QuenchArgs {
    config: PathBuf,
    /// Overrides `output_path` from the config.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Comma-separated columns to plot; all columns by default.
    #[arg(long, value_delimiter = ',')]
    plot: Vec<String>,
}

#[derive(Args)]
struct OracleArgs {
    config: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Exit with status 2 when any deviation exceeds this value.
    #[arg(long)]
    tolerance: Option<f64>,
}

#[derive(Args)]
struct AnalyzeArgs {
    csv: PathBuf,
    /// Odd extrema window in samples; defaults to about 0.2 time units.
    #[arg(long)]
    window: Option<usize>,
    #[arg(long, default_value_t = 1e-4)]
    epsilon: f64,
    #[arg(long)]
    output: Option<PathBuf>,
}

fn write_json<T: Serialize>(value: &T, path: Option<&Path>) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value).expect("report serializes") + "\n";
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io {
            path: p.to_path_buf(),
            source: e,
        }),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::Io {
            path: "<stdout>".into(),
            source: e,
        }),
    }
}

fn ground(args: GroundArgs) -> CliResult<()> {
    let policy = TruncationPolicy::new(args.cutoff, args.chi_max).map_err(|e| CliError::Config(e.to_string()))?;
    let report = ground_report(ParamsSpec::new(args.j, args.hx, args.hz), args.n, &policy)?;
    write_json(&report, args.output.as_deref())
}

fn quench(args: QuenchArgs) -> CliResult<()> {
    let cfg = QuenchConfig::load(&args.config)?;
    let csv_path = args
        .output
        .or_else(|| cfg.output_path.as_ref().map(PathBuf::from))
        .ok_or_else(|| CliError::Config("no output_path in config and no --output given".into()))?;
    let out = run_quench(&cfg)?;
    emit_csv(&out.series, &csv_path)?;
    info!("wrote {}", csv_path.display());
    let plot: Vec<&str> = if args.plot.is_empty() {
        out.series
            .names()
            .iter()
            .map(|s| s.as_str())
            .filter(|s| !matches!(*s, "bond_chi" | "discarded_weight" | "energy"))
            .collect()
    } else {
        args.plot.iter().map(|s| s.as_str()).collect()
    };
    if !plot.is_empty() {
        let title = format!(
            "N={} ({}, {}, {}) -> ({}, {}, {})",
            cfg.n, cfg.pre.j, cfg.pre.hx, cfg.pre.hz, cfg.post.j, cfg.post.hx, cfg.post.hz
        );
        emit_svg(&out.series, &plot, &csv_path.with_extension("svg"), &title)?;
    }
    write_json(&out.summary, Some(&csv_path.with_extension("summary.json")))
}

fn oracle(args: OracleArgs) -> CliResult<()> {
    let cfg = QuenchConfig::load(&args.config)?;
    let report = oracle_compare(&cfg)?;
    write_json(&report, args.output.as_deref())?;
    if let Some(tol) = args.tolerance {
        if !(report.max_deviation <= tol) {
            return Err(CliError::Contract(format!(
                "oracle deviation {:e} exceeds {tol:e}",
                report.max_deviation
            )));
        }
    }
    Ok(())
}

fn analyze_cmd(args: AnalyzeArgs) -> CliResult<()> {
    let series = read_csv(&args.csv)?;
    let report = analyze(&series, args.window, args.epsilon)?;
    write_json(&report, args.output.as_deref())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Ground(a) => ground(a),
        Command::Quench(a) => quench(a),
        Command::OracleCompare(a) => oracle(a),
        Command::Analyze(a) => analyze_cmd(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
