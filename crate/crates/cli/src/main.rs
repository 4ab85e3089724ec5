//! `qcs`: validate quiver files, print CS functions, count points over prime
//! fields, compute motivic series and run the verification suites.
//!
//! Exit codes: 0 when every check passes, 1 on a mathematical mismatch, 2 on
//! usage, input or budget errors.

mod commands;
mod config;

use anyhow::Result;
use clap::{Parser, Subcommand};
use commands::{CountKind, Outcome, SeriesKind, Suite};
use config::{Format, RunConfig};
use std::io::Write;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "qcs", version, about = "Quiver CS functions, point counts and motivic DT series")]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a quiver file and run the L-infinity axiom checks.
    Validate,
    /// Print the CS function f_d of the completed quiver.
    CsFunction,
    /// Count points over F_q.
    Count {
        #[arg(value_enum)]
        kind: CountKind,
    },
    /// Compute a truncated generating series.
    Series {
        #[arg(value_enum)]
        kind: SeriesKind,
    },
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
}

fn run(cli: &Cli) -> Result<Outcome> {
    let cfg = &cli.config;
    cfg.check()?;
    if cfg.jobs > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(cfg.jobs).build_global()?;
    }
    match &cli.command {
        Command::Validate => commands::validate(cfg),
        Command::CsFunction => commands::cs_function(cfg),
        Command::Count { kind } => commands::count(cfg, *kind),
        Command::Series { kind } => commands::series(cfg, *kind),
        Command::Verify { suite } => commands::verify(cfg, *suite),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            let _ = writeln!(std::io::stdout().lock(), "{}", outcome.output);
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            if cli.config.format == Format::Json {
                println!("{}", serde_json::json!({ "ok": false, "error": format!("{e:#}") }));
            }
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
