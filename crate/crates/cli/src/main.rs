use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use haarlab::rational::parse_rational;
use haarlab::report::{run, Command, ReportError, RunOptions, DEFAULT_MAX_ORDER};
use serde_json::json;

/// Exact Haar-measure verification reports.
#[derive(Debug, Parser)]
#[command(name = "haarlab", version)]
struct Cli {
    /// One of: enumerate, verify-haar, construct, quotient, counterexample,
    /// fubini, plane.
    command: String,

    /// JSON input document.
    #[arg(long)]
    input: PathBuf,

    /// Where to write the report; stdout if omitted.
    #[arg(long)]
    output: Option<PathBuf>,

    /// Largest accepted group order.
    #[arg(long, env = "HAARLAB_MAX_ORDER", default_value_t = DEFAULT_MAX_ORDER)]
    max_order: usize,

    /// Probe bound for `counterexample`, as `p/q`.
    #[arg(long)]
    probe_bound: Option<String>,

    /// Worker threads for independent checks.
    #[arg(long)]
    threads: Option<usize>,
}

/// Exit status for malformed input of any kind.
const INPUT_ERROR: u8 = 2;

fn fail(kind: &str, message: impl std::fmt::Display) -> ExitCode {
    let doc = json!({ "error": { "kind": kind, "message": message.to_string() } });
    eprintln!("{doc}");
    ExitCode::from(INPUT_ERROR)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail("usage", e.to_string().trim_end()),
    };

    let command: Command = match cli.command.parse() {
        Ok(c) => c,
        Err(e) => return fail(ReportError::kind(&e), &e),
    };
    let probe_bound = match cli.probe_bound.as_deref().map(parse_rational).transpose() {
        Ok(p) => p,
        Err(e) => return fail("invalid_rational", format!("--probe-bound: {e}")),
    };
    if cli.threads == Some(0) {
        return fail("usage", "--threads must be positive");
    }
    let input = match std::fs::read_to_string(&cli.input) {
        Ok(text) => text,
        Err(e) => return fail("io", format!("{}: {e}", cli.input.display())),
    };

    let options = RunOptions { max_order: cli.max_order, probe_bound, threads: cli.threads };
    let report = match run(command, &input, &options) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{}", e.to_json());
            return ExitCode::from(INPUT_ERROR);
        }
    };

    let text = report.render();
    match &cli.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                return fail("io", format!("{}: {e}", path.display()));
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(report.exit_code() as u8)
}
