use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pontryagin_core::verify::{self, RunSpec, DEFAULT_RUN_TOL, DEFAULT_SAMPLES};
use pontryagin_core::Error;

/// Verify convex Pontryagin duality certificates on a finite group.
#[derive(Parser, Debug)]
#[command(
    name = "pontryagin-verify",
    version,
    args_conflicts_with_subcommands = true
)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,

    /// cyclic:N, dihedral:N, symmetric:N, quaternion8, product(A,B) or table:<path>
    #[arg(long)]
    group: Option<String>,

    /// Comma-separated check names, or `all`.
    #[arg(long, default_value = "all")]
    checks: String,

    #[arg(long, default_value_t = DEFAULT_RUN_TOL)]
    tol: f64,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,

    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,

    /// Print a table of per-check results.
    #[arg(long)]
    summary: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the table for an existing report.
    Summarize { report: PathBuf },
}

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(Command::Summarize { report }) = &cli.command {
        return match verify::summarize(report) {
            Ok(table) => {
                print!("{table}");
                ExitCode::SUCCESS
            }
            Err(e) => usage_error(&e),
        };
    }
    let Some(group) = cli.group.as_deref() else {
        eprintln!("error: --group is required");
        return ExitCode::from(EXIT_USAGE);
    };
    let spec = match RunSpec::new(
        group,
        &cli.checks,
        cli.tol,
        cli.seed,
        cli.samples,
        cli.output.clone(),
    ) {
        Ok(spec) => spec,
        Err(e) => return usage_error(&e),
    };
    let report = match verify::run(&spec) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_FAIL);
        }
    };
    if cli.summary {
        print!("{}", verify::summary_table(&report));
    } else if cli.output.is_none() {
        match report.to_json() {
            Ok(json) => println!("{json}"),
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_FAIL);
            }
        }
    }
    if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    }
}

fn usage_error(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(EXIT_USAGE)
}
