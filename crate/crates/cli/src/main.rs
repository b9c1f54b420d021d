//! `sqsearch`: run, sweep and validate single-query ensemble search experiments.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sqsearch::report::{from_json, to_csv, to_json, to_table};
use sqsearch::{
    random_marked, run_experiment, sweep, validate_all, validation_grid, EtaRule, Execution, ExperimentPlan,
    ExperimentReport, MarkedSet, SearchError, DEFAULT_ETA_MULTIPLIER, DEFAULT_GLOBAL_CAP,
};

/// Environment variable overriding the default global-state cap.
const CAP_ENV: &str = "SQSEARCH_CAP";

const VALIDATION_TOL: f64 = 1e-10;

#[derive(Parser)]
#[command(name = "sqsearch", version, about = "Single-query ensemble database search simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run seeded trials on one database.
    Run(RunArgs),
    /// Run one experiment per (N, k) combination.
    Sweep(SweepArgs),
    /// Cross-check the factorized pipeline against the explicit global state.
    Validate(ValidateArgs),
    /// Pretty-print a saved JSON report.
    Report(ReportArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct EtaArgs {
    /// Fixed number of subsystems.
    #[arg(long, conflicts_with = "eta_mult")]
    eta: Option<usize>,
    /// Multiplier c in eta = ceil(c N ln N).
    #[arg(long)]
    eta_mult: Option<f64>,
}

impl EtaArgs {
    fn rule(&self) -> EtaRule {
        match (self.eta, self.eta_mult) {
            (Some(eta), _) => EtaRule::Fixed(eta),
            (None, Some(c)) => EtaRule::Multiplier(c),
            (None, None) => EtaRule::Multiplier(DEFAULT_ETA_MULTIPLIER),
        }
    }
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Record wall-clock time (makes output non-reproducible).
    #[arg(long)]
    timing: bool,
    /// Worker threads for trials; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Run trials on the calling thread only.
    #[arg(long)]
    sequential: bool,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    n: usize,
    /// Explicit marked items, e.g. `2,5`.
    #[arg(long, value_delimiter = ',', required_unless_present = "k", conflicts_with = "k")]
    marked: Vec<usize>,
    /// Number of marked items, placed at random from the seed.
    #[arg(long)]
    k: Option<usize>,
    #[command(flatten)]
    eta: EtaArgs,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SweepArgs {
    /// Database sizes, e.g. `8,16,32`.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    n: Vec<usize>,
    /// Marked-item counts.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    k: Vec<usize>,
    #[command(flatten)]
    eta: EtaArgs,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long, value_delimiter = ',', default_value = "2,4")]
    n: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
    eta: Vec<usize>,
    /// Maximum number of global amplitudes (default from SQSEARCH_CAP, else 2^20).
    #[arg(long)]
    cap: Option<usize>,
    /// Use only these marked items instead of every marked set.
    #[arg(long, value_delimiter = ',')]
    marked: Vec<usize>,
}

#[derive(Args)]
struct ReportArgs {
    path: PathBuf,
    /// Re-emit the saved reports in a machine format instead of a table.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Debug)]
enum CliError {
    Search(SearchError),
    Io(String),
}

impl From<SearchError> for CliError {
    fn from(e: SearchError) -> Self {
        CliError::Search(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Search(SearchError::Domain(_) | SearchError::Unsupported(_)) => 2,
            CliError::Search(SearchError::Resource { .. }) => 3,
            CliError::Search(SearchError::Validation(_)) => 4,
            CliError::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Search(e) => e.fmt(f),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Validate(args) => cmd_validate(args),
        Command::Report(args) => cmd_report(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Io(e.to_string()))?;
    Ok(pool.install(f))
}

fn execution(output: &OutputArgs) -> Execution {
    if output.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

fn cmd_run(args: RunArgs) -> Result<(), CliError> {
    let marked = match args.k {
        Some(k) => random_marked(args.n, k, args.seed)?,
        None => MarkedSet::new(args.marked),
    };
    let eta = args.eta.rule().eta_for(args.n)?;
    let plan = ExperimentPlan::new(args.n, marked, eta, args.seed, args.trials)?;
    let exec = execution(&args.output);
    let report = in_pool(args.output.threads, || run_experiment(&plan, exec))??;
    emit(vec![report], &args.output)
}

fn cmd_sweep(args: SweepArgs) -> Result<(), CliError> {
    let rule = args.eta.rule();
    let exec = execution(&args.output);
    let reports = in_pool(args.output.threads, || {
        sweep(&args.n, &args.k, rule, args.trials, args.seed, exec)
    })??;
    emit(reports, &args.output)
}

fn emit(reports: Vec<ExperimentReport>, output: &OutputArgs) -> Result<(), CliError> {
    let reports: Vec<ExperimentReport> = if output.timing {
        reports
    } else {
        reports.into_iter().map(ExperimentReport::without_timing).collect()
    };
    if matches!(output.format, Format::Csv) {
        for r in &reports {
            for w in &r.warnings {
                eprintln!("warning: N={} k={}: {w}", r.n, r.k);
            }
        }
    }
    let text = match output.format {
        Format::Csv => to_csv(&reports),
        Format::Json => to_json(&reports),
    };
    write_out(&text, output.out.as_ref())
}

fn write_out(text: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn default_cap() -> Result<usize, CliError> {
    match std::env::var(CAP_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| SearchError::Domain(format!("{CAP_ENV}={v} is not a non-negative integer")).into()),
        Err(_) => Ok(DEFAULT_GLOBAL_CAP),
    }
}

fn cmd_validate(args: ValidateArgs) -> Result<(), CliError> {
    let cap = match args.cap {
        Some(c) => c,
        None => default_cap()?,
    };
    let cases = if args.marked.is_empty() {
        validation_grid(&args.n, &args.eta)
    } else {
        let marked = MarkedSet::new(args.marked);
        args.n
            .iter()
            .flat_map(|&n| {
                let marked = marked.clone();
                args.eta.iter().map(move |&eta| sqsearch::ValidationCase { n, eta, marked: marked.clone() })
            })
            .collect()
    };
    let reports = validate_all(&cases, cap, Execution::Parallel)?;
    let mut out = io::stdout().lock();
    let mut worst: f64 = 0.0;
    let mut failures = 0;
    for r in &reports {
        let ok = r.passes(VALIDATION_TOL);
        failures += !ok as usize;
        worst = worst.max(r.max_discrepancy);
        writeln!(
            out,
            "N={} eta={} marked={{{}}} max_discrepancy={:e} {}",
            r.case.n,
            r.case.eta,
            r.case.marked,
            r.max_discrepancy,
            if ok { "ok" } else { "FAIL" }
        )?;
    }
    writeln!(out, "{} cases, {failures} failed, worst discrepancy {worst:e}", reports.len())?;
    if failures > 0 {
        return Err(SearchError::Validation(format!("{failures} cases exceed {VALIDATION_TOL:e}")).into());
    }
    Ok(())
}

fn cmd_report(args: ReportArgs) -> Result<(), CliError> {
    let text = fs::read_to_string(&args.path)?;
    let reports = from_json(&text).map_err(|e| CliError::Io(format!("{}: {e}", args.path.display())))?;
    let rendered = match args.format {
        None => to_table(&reports),
        Some(Format::Csv) => to_csv(&reports),
        Some(Format::Json) => to_json(&reports),
    };
    write_out(&rendered, None)
}
