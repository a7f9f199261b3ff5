//! `spinchannel` command-line front end.
//!
//! Exit status is 0 on success, 1 when a computation fails and 2 for usage
//! errors. Failures are reported on stderr as one JSON object.

pub mod commands;
pub mod config;
pub mod output;
pub mod validate;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use serde_json::json;

use crate::error::Error;
use config::{CommandName, Format, Mode, RunConfig, Spacing};
use validate::{run_validation, ValidationHooks};

#[derive(Debug, Clone, Parser)]
#[command(name = "spinchannel", version, about = "Spin chains with weakly coupled end probes as quantum channels")]
pub struct Flags {
    /// gap-scan, teleport, transfer, share or validate (may come from --config)
    #[arg(value_enum)]
    pub command: Option<CommandName>,
    /// JSON file with defaults for any flag
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// chain length for single-length commands
    #[arg(long)]
    pub length: Option<usize>,
    /// smallest chain length of a sweep
    #[arg(long)]
    pub l_min: Option<usize>,
    /// largest chain length of a sweep
    #[arg(long)]
    pub l_max: Option<usize>,
    /// length increment of a sweep (default 2)
    #[arg(long)]
    pub l_step: Option<usize>,
    /// bulk exchange coupling (default 1)
    #[arg(long)]
    pub j: Option<f64>,
    /// probe coupling, or a comma-separated list
    #[arg(long, value_delimiter = ',')]
    pub jp: Option<Vec<f64>>,
    /// sender coupling, or "auto" for the effective probe coupling
    #[arg(long)]
    pub gamma: Option<String>,
    /// lowest temperature, or the single temperature for share and full mode
    #[arg(long)]
    pub temp_min: Option<f64>,
    #[arg(long)]
    pub temp_max: Option<f64>,
    #[arg(long)]
    pub temp_points: Option<usize>,
    #[arg(long, value_enum)]
    pub temp_scale: Option<Spacing>,
    /// end of the transfer time window (default 2π/J_eff in full mode, 4π/J_eff for the effective peak search)
    #[arg(long)]
    pub t_max: Option<f64>,
    /// number of transfer time samples
    #[arg(long)]
    pub t_points: Option<usize>,
    /// effective three-spin model or full-chain propagation
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    /// gap exponent for the validity window; fitted from the sweep when absent
    #[arg(long)]
    pub alpha: Option<f64>,
    /// eigensolver residual tolerance
    #[arg(long)]
    pub tol: Option<f64>,
    /// local error tolerance per propagation step
    #[arg(long)]
    pub krylov_tol: Option<f64>,
    /// seed for Lanczos start vectors
    #[arg(long)]
    pub seed: Option<u64>,
    /// output path; a JSON sidecar is written next to CSV output
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Compute(Error),
    Sweep(String),
    Io(String),
    ChecksFailed(Vec<&'static str>),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Compute(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }

    pub fn record(&self) -> serde_json::Value {
        let (kind, message) = match self {
            CliError::Usage(m) => ("usage", m.clone()),
            CliError::Compute(e) => (e.kind(), e.to_string()),
            CliError::Sweep(m) => ("sweep-failure", m.clone()),
            CliError::Io(m) => ("io", m.clone()),
            CliError::ChecksFailed(names) => ("validation-failed", format!("failing checks: {}", names.join(", "))),
        };
        let mut record = json!({ "error": kind, "message": message, "exit-code": self.exit_code() });
        if let CliError::ChecksFailed(names) = self {
            record["checks"] = json!(names);
        }
        record
    }
}

/// Parses the process arguments and runs the command.
pub fn main() -> ExitCode {
    let flags = match Flags::try_parse() {
        Ok(flags) => flags,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return report_error(&CliError::Usage(e.to_string().trim_end().to_string())),
    };
    run_with(&flags, &ValidationHooks::default())
}

pub fn run_with(flags: &Flags, hooks: &ValidationHooks) -> ExitCode {
    match execute(flags, hooks) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => report_error(&e),
    }
}

fn report_error(e: &CliError) -> ExitCode {
    let mut stderr = std::io::stderr().lock();
    let _ = writeln!(stderr, "{}", e.record());
    ExitCode::from(e.exit_code())
}

/// Runs one command; the error carries the exit code and the stderr record.
pub fn execute(flags: &Flags, hooks: &ValidationHooks) -> Result<(), CliError> {
    let cfg = RunConfig::resolve(flags)?;
    let report = match cfg.command {
        CommandName::Validate => {
            let hooks = ValidationHooks { options: crate::eigen::LanczosOptions { seed: cfg.seed, ..hooks.options }, ..*hooks };
            let outcome = run_validation(&hooks);
            print!("{}", outcome.table());
            return if outcome.passed() { Ok(()) } else { Err(CliError::ChecksFailed(outcome.failed_names())) };
        }
        CommandName::GapScan => commands::gap_scan(&cfg)?,
        CommandName::Teleport => commands::teleport(&cfg)?,
        CommandName::Transfer => commands::transfer(&cfg)?,
        CommandName::Share => commands::share(&cfg)?,
    };
    for path in report.write(&cfg)? {
        println!("wrote {}", path.display());
    }
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    Ok(())
}
