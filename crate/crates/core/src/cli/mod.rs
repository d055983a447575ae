//! Command-line front end. Every analysis writes CSV (or JSON) tables that
//! start with a `#` block recording the full run configuration.
//!
//! Exit codes: 0 on success, 2 on a usage error, 1 on a numerical failure.

pub mod commands;
pub mod config;
pub mod output;
pub mod recipes;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::Parser;

pub use commands::{Failure, Report};
pub use config::{Command, Format, IntSet, RunConfig, Window};
pub use output::{Cell, Table};

#[derive(Debug, Parser)]
#[command(
    name = "ringwalk",
    version,
    about = "Quantum and classical walks on ring lattices",
    after_help = "Figure recipes (fig1 fig2 fig4 fig5 fig6 fig8) write one file per curve into --out, a directory."
)]
struct Cli {
    /// Analysis or figure recipe to run
    #[arg(value_parser = Command::NAMES)]
    command: Option<String>,

    /// Plain-text `key = value` file; flags given here take precedence
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Ring size, or `inf` for the infinite lattice
    #[arg(long)]
    n: Option<String>,
    /// Neighbors on each side
    #[arg(long)]
    m: Option<String>,
    /// Set of m values: `a:b`, `a:b:step` or `a,b,c`
    #[arg(long)]
    m_range: Option<String>,
    /// classical or quantum
    #[arg(long)]
    kind: Option<String>,
    #[arg(long)]
    source: Option<String>,
    #[arg(long)]
    target: Option<String>,
    /// Signed node offset from the source
    #[arg(long, allow_hyphen_values = true)]
    offset: Option<String>,
    /// Path lengths for transport fits
    #[arg(long)]
    distances: Option<String>,
    /// Ring sizes for asymmetry scaling
    #[arg(long)]
    sizes: Option<String>,
    /// Fit window `lo:hi`
    #[arg(long)]
    window: Option<String>,
    #[arg(long)]
    t_min: Option<String>,
    #[arg(long)]
    t_max: Option<String>,
    #[arg(long)]
    t_count: Option<String>,
    /// linear or log
    #[arg(long)]
    spacing: Option<String>,
    /// Output file, or directory for figure recipes; stdout if omitted
    #[arg(long)]
    out: Option<String>,
    /// csv or json
    #[arg(long)]
    format: Option<String>,
    /// Read and write node labels starting at 1
    #[arg(long)]
    one_based: bool,
    /// Quadrature convergence target
    #[arg(long)]
    quad_tol: Option<String>,
    /// Quadrature panel limit
    #[arg(long)]
    quad_max_subdiv: Option<String>,
    /// Log-residual band separating asymmetry clusters
    #[arg(long)]
    cluster_band: Option<String>,
    /// Largest disagreement `verify` accepts
    #[arg(long)]
    verify_tol: Option<String>,
}

impl Cli {
    fn flags(&self) -> Vec<(&'static str, &str)> {
        let pairs: [(&'static str, &Option<String>); 21] = [
            ("command", &self.command),
            ("n", &self.n),
            ("m", &self.m),
            ("m_range", &self.m_range),
            ("kind", &self.kind),
            ("source", &self.source),
            ("target", &self.target),
            ("offset", &self.offset),
            ("distances", &self.distances),
            ("sizes", &self.sizes),
            ("window", &self.window),
            ("t_min", &self.t_min),
            ("t_max", &self.t_max),
            ("t_count", &self.t_count),
            ("spacing", &self.spacing),
            ("out", &self.out),
            ("format", &self.format),
            ("quad_tol", &self.quad_tol),
            ("quad_max_subdiv", &self.quad_max_subdiv),
            ("cluster_band", &self.cluster_band),
            ("verify_tol", &self.verify_tol),
        ];
        let mut out: Vec<(&'static str, &str)> = pairs
            .iter()
            .filter_map(|(k, v)| v.as_deref().map(|v| (*k, v)))
            .collect();
        if self.one_based {
            out.push(("one_based", "true"));
        }
        out
    }
}

/// Builds the run configuration: config file first, then flags on top.
pub fn parse_args<I, T>(args: I) -> Result<RunConfig, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args)?;
    let invalid = |msg: String| clap::Error::raw(clap::error::ErrorKind::ValueValidation, msg + "\n");
    let mut config = RunConfig::default();
    if let Some(path) = &cli.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
        config
            .merge_text(&text)
            .map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    }
    for (key, value) in cli.flags() {
        config.set(key, value).map_err(invalid)?;
    }
    if config.command.is_none() {
        return Err(invalid("no command given (pass one or set `command` in --config)".into()));
    }
    Ok(config)
}

/// Runs the analysis and returns its tables without writing anything.
pub fn execute(config: &RunConfig) -> Result<Report, Failure> {
    let command = config
        .command
        .ok_or_else(|| Failure::Usage("no command given".into()))?;
    match command {
        Command::Spectrum => commands::spectrum(config),
        Command::Evolve => commands::evolve(config),
        Command::Snapshot => commands::snapshot(config),
        Command::Infinite => commands::infinite(config),
        Command::Limiting => commands::limiting(config),
        Command::Asymmetry => commands::asymmetry(config),
        Command::Transport => commands::transport(config),
        Command::Scaling => commands::scaling(config),
        Command::Verify => commands::verify(config),
        fig => recipes::figure(config, fig),
    }
}

/// Destination of each table of a report.
fn destinations(config: &RunConfig, report: &Report) -> Vec<Option<PathBuf>> {
    let ext = config.format.extension();
    let recipe = config.command.is_some_and(Command::is_recipe);
    report
        .tables
        .iter()
        .map(|(name, _)| {
            if recipe {
                let dir = config.out.clone().unwrap_or_else(|| PathBuf::from("."));
                Some(dir.join(format!("{name}.{ext}")))
            } else {
                config.out.as_ref().map(|out| {
                    if name.is_empty() {
                        out.clone()
                    } else {
                        output::companion(out, name)
                    }
                })
            }
        })
        .collect()
}

/// Writes every table of a report, atomically per file.
pub fn write_report(config: &RunConfig, report: &Report) -> std::io::Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    let stdout = std::io::stdout();
    for ((_, table), dest) in report.tables.iter().zip(destinations(config, report)) {
        let text = table.render(config);
        match dest {
            Some(path) => {
                output::write_atomic(&path, &text)?;
                written.push(path);
            }
            None => stdout.lock().write_all(text.as_bytes())?,
        }
    }
    Ok(written)
}

pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match parse_args(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let report = match execute(&config) {
        Ok(r) => r,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return 2;
        }
        Err(Failure::Numeric(msg)) => {
            eprintln!("numerical failure: {msg}");
            return 1;
        }
    };
    if let Err(e) = write_report(&config, &report) {
        eprintln!("error: cannot write output: {e}");
        return 1;
    }
    match report.failure {
        Some(msg) => {
            eprintln!("numerical failure: {msg}");
            1
        }
        None => 0,
    }
}
