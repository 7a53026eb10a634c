use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use mmtv_cli::{run, Cli, CliError};

fn emit(cli: &Cli) -> Result<(), CliError> {
    let report = run(cli)?;
    let json = report.to_json();
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    match &cli.out {
        Some(path) => std::fs::write(path, json).map_err(|e| CliError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        }),
        None => std::io::stdout().write_all(json.as_bytes()).map_err(|e| CliError::Io {
            path: "<stdout>".into(),
            message: e.to_string(),
        }),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match emit(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
