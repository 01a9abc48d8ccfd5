mod args;
mod commands;
mod input;
mod report;

use std::process::ExitCode;

use clap::Parser;

use args::Cli;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("malformed input {path}: {msg}")]
    Input { path: String, msg: String },
    #[error(transparent)]
    Lib(#[from] distsep::Error),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn code(&self) -> u8 {
        use distsep::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Input { .. } => 3,
            CliError::Lib(E::Infeasible(_)) => 4,
            CliError::Lib(E::SymbolicLimit { .. }) => 5,
            CliError::Lib(_) | CliError::Io(_) => 1,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match commands::run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
