//! `vislab`: exact evaluation, simulation, capacity estimation and limit-law
//! checks from the command line. Results go to stdout as JSON, diagnostics
//! to stderr. Exit codes: 0 success, 1 runtime failure, 2 usage error.

mod args;
mod commands;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use serde_json::Value;

use args::{merge, Cli, Command};

#[derive(Debug)]
pub struct UsageError(pub String);

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Runtime(String),
}

fn load_config(cli: &Cli) -> Result<Option<Value>, Failure> {
    let Some(path) = &cli.config else {
        return Ok(None);
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map(Some)
        .map_err(|e| Failure::Usage(format!("config {} is not valid JSON: {e}", path.display())))
}

fn run(cli: &Cli) -> Result<Value, Failure> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Failure::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Runtime(format!("cannot start worker pool: {e}")))?;
    }
    let config = load_config(cli)?;
    let cfg = config.as_ref();
    match &cli.command {
        Command::Exact(a) => commands::exact(&merge(a, cfg, true)?),
        Command::Simulate(a) => commands::simulate(&merge(a, cfg, true)?),
        Command::Capacity(a) => commands::capacity(&merge(a, cfg, false)?),
        Command::LimitCheck(a) => commands::limit_check(&merge(a, cfg, true)?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(value) => {
            let mut text = serde_json::to_string_pretty(&value).expect("JSON values serialize");
            text.push('\n');
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
