use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use entangle_cli::{execute, Cli, CliError};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = execute(&cli.command).and_then(|outcome| {
        match cli.command.out_path() {
            Some(path) => {
                std::fs::write(path, &outcome.text).map_err(|source| CliError::Io { path: path.clone(), source })?
            }
            None => {
                let mut stdout = std::io::stdout().lock();
                // A closed pipe is not worth reporting.
                let _ = stdout.write_all(outcome.text.as_bytes()).and_then(|_| stdout.flush());
            }
        }
        Ok(outcome.exit_code)
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
