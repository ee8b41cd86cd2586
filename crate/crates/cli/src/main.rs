use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ellmot::report::{
    emit_report, fixture_config, read_raw_config, run_build_motive, run_suite, Config, Format, Report, Suite,
};
use ellmot::Error;

/// Exact verification of elliptic-curve cycles, projectors and bar-complex chains.
#[derive(Parser)]
#[command(name = "ellmot", version)]
struct Cli {
    /// JSON configuration (defaults to the built-in 37a1 fixture).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output format: json or text.
    #[arg(long, global = true, default_value = "text")]
    format: String,
    /// Seed for the randomized checks; overrides the configuration.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one suite: projectors, divisors, boundaries, bar or all.
    Verify { suite: String },
    /// Build the chain for the first n configured functions.
    BuildMotive {
        #[arg(long)]
        n: usize,
    },
    /// Run every suite.
    Report,
}

fn load(path: Option<&Path>, seed: Option<u64>) -> Result<Config, Error> {
    let mut raw = match path {
        Some(p) => read_raw_config(p)?,
        None => fixture_config(),
    };
    if let Some(s) = seed {
        raw.seed = s;
    }
    raw.validate()
}

fn run(cli: Cli) -> Result<Report, Error> {
    let format: Format = cli.format.parse()?;
    let suite = match &cli.command {
        Command::Verify { suite } => Some(suite.parse::<Suite>()?),
        _ => None,
    };
    let cfg = load(cli.config.as_deref(), cli.seed)?;
    let report = match cli.command {
        Command::Verify { .. } => run_suite(&cfg, suite.expect("parsed above")),
        Command::Report => run_suite(&cfg, Suite::All),
        Command::BuildMotive { n } => {
            if n == 0 || n > cfg.functions.len() {
                return Err(Error::Input(format!("--n must be between 1 and {}", cfg.functions.len())));
            }
            run_build_motive(&cfg, n)
        }
    };
    emit_report(&report, format, cli.out.as_deref())?;
    Ok(report)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(report) => ExitCode::from(report.exit_code() as u8),
        Err(e) => {
            eprintln!("ellmot: {e}");
            ExitCode::from(if matches!(e, Error::Input(_)) { 2 } else { 1 })
        }
    }
}
