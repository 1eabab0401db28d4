//! Command-line front end for `chromrate-core`: configuration, result
//! envelopes, output formats and the verification suites.
//!
//! Exit codes: 0 success, 1 domain error (including solver refusals),
//! 2 verification failure, 64 usage error.

pub mod commands;
pub mod config;
pub mod envelope;
pub mod output;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::time::Instant;

use clap::Parser;

use crate::config::{Cli, RunConfig};
use crate::envelope::ResultEnvelope;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Domain(#[from] chromrate_core::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

/// A command's payload and, for `verify`, whether every suite passed.
pub struct Outcome {
    pub payload: serde_json::Value,
    pub verified: Option<bool>,
}

/// Parses `args`, runs the command and writes the result. Returns the exit
/// code.
pub fn run_cli<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let (command, opts) = cli.command.split();
    let config = match RunConfig::resolve(command, opts) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_USAGE;
        }
    };
    run(&config, stdout, stderr)
}

/// Runs a resolved configuration and writes its envelope.
pub fn run(config: &RunConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let started = Instant::now();
    let (payload, code) = match commands::execute(config) {
        Ok(Outcome { payload, verified: Some(false) }) => (payload, EXIT_VERIFY),
        Ok(Outcome { payload, .. }) => (payload, EXIT_OK),
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            return EXIT_USAGE;
        }
        Err(CliError::Domain(e)) => (envelope::error_payload(&e), EXIT_DOMAIN),
        Err(CliError::Io(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_DOMAIN;
        }
    };
    let envelope = ResultEnvelope::new(config.clone(), started.elapsed(), payload);
    let rendered = match output::render(&envelope, config.format) {
        Ok(text) => text,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_DOMAIN;
        }
    };
    let written = match &config.output {
        Some(path) => std::fs::write(path, rendered),
        None => stdout.write_all(rendered.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: {e}");
        return EXIT_DOMAIN;
    }
    if code == EXIT_DOMAIN {
        if let Some(msg) = envelope.payload.pointer("/error/message").and_then(|m| m.as_str()) {
            let _ = writeln!(stderr, "error: {msg}");
        }
    }
    code
}
