//! Command-line front end: single-point evaluation, CSV parameter sweeps and
//! reproduction of the shipped accuracy tables.

mod commands;

use clap::{Args, Parser, Subcommand};
use relfd::{EvalConfig, FdError};
use std::process::ExitCode;

/// Exit codes: 0 success, 2 usage/domain error, 3 convergence error, 4 I/O error.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Convergence(String),
    Io(String),
    /// Downstream closed the pipe; exit quietly.
    BrokenPipe,
}

impl From<FdError> for CliError {
    fn from(e: FdError) -> Self {
        match e {
            FdError::Domain { .. } | FdError::Usage(_) => CliError::Usage(e.to_string()),
            FdError::Convergence { .. } => CliError::Convergence(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            CliError::BrokenPipe
        } else {
            CliError::Io(e.to_string())
        }
    }
}

#[derive(Parser)]
#[command(
    name = "relfd",
    about = "Relativistic Fermi-Dirac integrals: expansions with a quadrature reference",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate F_q(eta, beta) at a single point.
    Eval(EvalArgs),
    /// Sweep one parameter over a grid and write a CSV of errors vs the reference.
    Sweep(SweepArgs),
    /// Reproduce one of the shipped accuracy tables as CSV.
    Table(TableArgs),
}

/// Numbers accept simple fractions ("4/3") alongside decimals.
fn parse_number(s: &str) -> Result<f64, String> {
    if let Some((num, den)) = s.split_once('/') {
        let n: f64 = num.trim().parse().map_err(|_| format!("bad number {s:?}"))?;
        let d: f64 = den.trim().parse().map_err(|_| format!("bad number {s:?}"))?;
        if d == 0.0 {
            return Err(format!("zero denominator in {s:?}"));
        }
        return Ok(n / d);
    }
    s.parse().map_err(|_| format!("bad number {s:?}"))
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Order q >= 0 (fractions like 3/2 accepted).
    #[arg(long, value_parser = parse_number)]
    q: f64,
    /// Config file path, or the built-in preset name "paper-sec6".
    #[arg(long)]
    config: Option<String>,
    /// Relative tolerance for convergent series.
    #[arg(long, value_parser = parse_number)]
    tol: Option<f64>,
    /// Highest index of the large-eta / small-beta series.
    #[arg(long)]
    nterms: Option<usize>,
    /// Highest index of the large-beta expansions.
    #[arg(long)]
    kmax: Option<usize>,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Degeneracy parameter eta.
    #[arg(long, value_parser = parse_number, allow_hyphen_values = true)]
    eta: f64,
    /// Relativity parameter beta >= 0.
    #[arg(long, value_parser = parse_number)]
    beta: f64,
    /// Evaluation method (default: auto).
    #[arg(long, default_value = "auto")]
    method: String,
    /// Emit a single machine-readable key=value line.
    #[arg(long)]
    record: bool,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Swept axis: eta or beta.
    #[arg(long)]
    axis: String,
    /// Grid start (inclusive).
    #[arg(long, value_parser = parse_number, allow_hyphen_values = true)]
    start: f64,
    /// Grid stop (inclusive).
    #[arg(long, value_parser = parse_number, allow_hyphen_values = true)]
    stop: f64,
    /// Number of grid points (>= 2).
    #[arg(long)]
    count: usize,
    /// Fixed eta (required when sweeping beta).
    #[arg(long, value_parser = parse_number, allow_hyphen_values = true)]
    eta: Option<f64>,
    /// Fixed beta (required when sweeping eta).
    #[arg(long, value_parser = parse_number)]
    beta: Option<f64>,
    /// Comma-separated method list.
    #[arg(long, default_value = "auto")]
    methods: String,
    /// Tolerance for the quadrature reference column.
    #[arg(long, value_parser = parse_number)]
    oracle_tol: Option<f64>,
    /// Output CSV path (stdout when omitted).
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct TableArgs {
    /// Which table: table1 (generic q) or table2 (half-integer q).
    name: String,
    /// Output CSV path (stdout when omitted).
    #[arg(long)]
    out: Option<String>,
    /// Config file path or "paper-sec6".
    #[arg(long)]
    config: Option<String>,
}

fn load_config(source: Option<&str>) -> Result<EvalConfig, CliError> {
    match source {
        None | Some("paper-sec6") => Ok(EvalConfig::default()),
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            Ok(EvalConfig::parse(&text)?)
        }
    }
}

fn apply_overrides(cfg: &mut EvalConfig, common: &CommonArgs) {
    if let Some(tol) = common.tol {
        cfg.series_tol = tol;
    }
    if let Some(n) = common.nterms {
        cfg.n_terms_large_eta = n;
        cfg.n_terms_small_beta = n;
    }
    if let Some(k) = common.kmax {
        cfg.k_max_large_beta = k;
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Eval(args) => commands::run_eval(args),
        Command::Sweep(args) => commands::run_sweep(args),
        Command::Table(args) => commands::run_table(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Convergence(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(CliError::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(4)
        }
        Err(CliError::BrokenPipe) => ExitCode::SUCCESS,
    }
}
