//! `cohent` command-line front end. Reports go to stdout (or `--out`) as JSON,
//! errors go to stderr as JSON, and the exit code classifies the outcome:
//! 0 success, 1 invariant failure, 2 invalid input, 3 solver non-convergence.

mod args;
mod commands;
mod error;
mod report;
mod state_file;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command, Format};
use error::{CliError, CliResult};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => e.exit(),
        Err(e) => {
            let err = CliError::input("arguments", e.render().to_string().trim().to_string());
            return fail(&err);
        }
    };
    if cli.global.threads > 0 {
        // only fails if a pool already exists, which cannot happen this early
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.global.threads).build_global();
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(&e),
    }
}

fn fail(e: &CliError) -> ExitCode {
    eprintln!("{}", e.to_json());
    ExitCode::from(e.exit_code() as u8)
}

fn run(cli: &Cli) -> CliResult<()> {
    let g = &cli.global;
    let report = match &cli.command {
        Command::Measure(a) => commands::measure::run(g, a)?,
        Command::Transform(a) => commands::transform::run(g, a)?,
        Command::Certify(a) => commands::certify::run(g, a)?,
        Command::Family(a) => {
            let table = commands::family::table(g, a)?;
            let format = a.format.unwrap_or_else(|| match &a.out {
                Some(p) if p.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) => Format::Csv,
                _ => Format::Json,
            });
            let text = match format {
                Format::Csv => table.to_csv()?,
                Format::Json => commands::family::report(g, a, &table).to_json(),
            };
            return emit(a.out.as_deref(), &text);
        }
        Command::Selftest(a) => {
            let (report, failure) = commands::selftest::run(g, a);
            emit(None, &report.to_json())?;
            return failure.map_or(Ok(()), Err);
        }
    };
    emit(None, &report.to_json())
}

fn emit(out: Option<&std::path::Path>, text: &str) -> CliResult<()> {
    let io = |path: String| move |source| CliError::Io { path, source };
    match out {
        Some(path) => std::fs::write(path, text).map_err(io(path.display().to_string())),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(io("stdout".into())),
    }
}
