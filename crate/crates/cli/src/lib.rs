//! Library side of the `ldic` command-line tool.
//!
//! Exit codes: 0 success, 1 verification or golden mismatch, 2 usage error.

pub mod args;
pub mod commands;
pub mod docs;
pub mod golden;
pub mod manifest;
pub mod svg;

use std::fs;

pub use args::{Cli, Command, Format, PolicyName};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] ldic_core::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        2
    }
}

/// Rendered result of a command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub text: String,
    pub code: u8,
}

impl Outcome {
    pub fn ok(text: String) -> Self {
        Outcome { text, code: 0 }
    }
}

/// Runs a parsed invocation. Output goes to `--out` when given, and is
/// otherwise returned for the caller to print.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match (&cli.manifest, &cli.command) {
        (Some(path), _) => manifest::run(path),
        (None, Some(cmd)) => {
            let outcome = commands::execute(cmd)?;
            match &cmd.output().out {
                Some(path) => {
                    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                        fs::create_dir_all(dir)?;
                    }
                    fs::write(path, &outcome.text)?;
                    Ok(Outcome { text: String::new(), code: outcome.code })
                }
                None => Ok(outcome),
            }
        }
        (None, None) => Err(CliError::Usage("expected a subcommand or --manifest FILE (see --help)".into())),
    }
}
