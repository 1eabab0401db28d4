//! Command-line flags, the optional TOML config file and their merge into a
//! validated [`RunConfig`]. Precedence: flags, then file, then defaults.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_EPS: f64 = 0.05;
pub const DEFAULT_THETA: f64 = 0.1;
/// Samples for `simulate` when `--samples` is not given.
pub const DEFAULT_SIMULATE_SAMPLES: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Theory,
    Moments,
    Threshold,
    Simulate,
    CountMatrices,
    SecondMoment,
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "chromrate", version, about = "Moment calculus and exact experiments for the chromatic number of G(n, p)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandArgs,
}

#[derive(Debug, Subcommand)]
pub enum CommandArgs {
    /// gamma, Delta, x0 and the predicted colouring-rate interval.
    Theory(Opts),
    /// First moment of Z_k and the bound pipelines at a given k.
    Moments(Opts),
    /// The first-moment threshold k*.
    Threshold(Opts),
    /// Seeded G(n, p) samples with exact alpha and chi.
    Simulate(Opts),
    /// Exact 0-1 matrix count with given margins against McKay's estimate.
    CountMatrices(Opts),
    /// Exact desk-scale second moment of Z_k.
    SecondMoment(Opts),
    /// Run verification suites.
    Verify(Opts),
}

impl CommandArgs {
    pub fn split(self) -> (Command, Opts) {
        match self {
            CommandArgs::Theory(o) => (Command::Theory, o),
            CommandArgs::Moments(o) => (Command::Moments, o),
            CommandArgs::Threshold(o) => (Command::Threshold, o),
            CommandArgs::Simulate(o) => (Command::Simulate, o),
            CommandArgs::CountMatrices(o) => (Command::CountMatrices, o),
            CommandArgs::SecondMoment(o) => (Command::SecondMoment, o),
            CommandArgs::Verify(o) => (Command::Verify, o),
        }
    }
}

/// Options shared by every subcommand; each command validates the ones it needs.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Opts {
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub k: Option<u64>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Verification suite name, or `all`.
    #[arg(long)]
    pub suite: Option<String>,
    /// Grid size for the x0 and lemma suites.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Row sums, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub rows: Option<Vec<u64>>,
    /// Column sums, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub cols: Option<Vec<u64>>,
    /// Write the result here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// TOML file with any of the keys above.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

impl Opts {
    /// Fills every unset field from `other`.
    fn or(self, other: Opts) -> Opts {
        Opts {
            n: self.n.or(other.n),
            p: self.p.or(other.p),
            k: self.k.or(other.k),
            eps: self.eps.or(other.eps),
            theta: self.theta.or(other.theta),
            samples: self.samples.or(other.samples),
            seed: self.seed.or(other.seed),
            suite: self.suite.or(other.suite),
            grid: self.grid.or(other.grid),
            rows: self.rows.or(other.rows),
            cols: self.cols.or(other.cols),
            output: self.output.or(other.output),
            format: self.format.or(other.format),
            config: self.config,
        }
    }
}

/// Fully resolved configuration, recorded in every result envelope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub n: Option<u64>,
    pub p: Option<f64>,
    pub k: Option<u64>,
    pub eps: f64,
    pub theta: f64,
    pub samples: Option<usize>,
    pub seed: u64,
    pub suite: Option<String>,
    pub grid: Option<usize>,
    pub rows: Option<Vec<u64>>,
    pub cols: Option<Vec<u64>>,
    pub output: Option<PathBuf>,
    pub format: Format,
}

fn read_file(path: &Path) -> Result<Opts, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))
}

impl RunConfig {
    pub fn resolve(command: Command, flags: Opts) -> Result<RunConfig, CliError> {
        let file = match &flags.config {
            Some(path) => read_file(path)?,
            None => Opts::default(),
        };
        let o = flags.or(file);
        let cfg = RunConfig {
            command,
            n: o.n,
            p: o.p,
            k: o.k,
            eps: o.eps.unwrap_or(DEFAULT_EPS),
            theta: o.theta.unwrap_or(DEFAULT_THETA),
            samples: o.samples,
            seed: o.seed.unwrap_or(DEFAULT_SEED),
            suite: o.suite,
            grid: o.grid,
            rows: o.rows,
            cols: o.cols,
            output: o.output,
            format: o.format.unwrap_or_default(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        let need = |present: bool, flag: &str| {
            if present {
                Ok(())
            } else {
                Err(CliError::Usage(format!("`{}` requires --{flag}", command_name(self.command))))
            }
        };
        match self.command {
            Command::Theory | Command::Threshold => {
                need(self.n.is_some(), "n")?;
                need(self.p.is_some(), "p")?;
            }
            Command::Moments | Command::SecondMoment => {
                need(self.n.is_some(), "n")?;
                need(self.p.is_some(), "p")?;
                need(self.k.is_some(), "k")?;
            }
            Command::Simulate => {
                need(self.n.is_some(), "n")?;
                need(self.p.is_some(), "p")?;
            }
            Command::CountMatrices => {
                need(self.rows.is_some(), "rows")?;
                need(self.cols.is_some(), "cols")?;
            }
            Command::Verify => {}
        }
        if !(self.eps.is_finite() && self.theta.is_finite()) {
            return Err(CliError::Usage("--eps and --theta must be finite".into()));
        }
        Ok(())
    }

    pub fn n(&self) -> u64 {
        self.n.expect("validated")
    }
    pub fn p(&self) -> f64 {
        self.p.expect("validated")
    }
    pub fn k(&self) -> u64 {
        self.k.expect("validated")
    }
}

pub fn command_name(c: Command) -> &'static str {
    match c {
        Command::Theory => "theory",
        Command::Moments => "moments",
        Command::Threshold => "threshold",
        Command::Simulate => "simulate",
        Command::CountMatrices => "count-matrices",
        Command::SecondMoment => "second-moment",
        Command::Verify => "verify",
    }
}
