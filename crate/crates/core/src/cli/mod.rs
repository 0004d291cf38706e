//! `radex` command-line front end.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 forbidden
//! instance (a denominator vanishes within the requested range), 3
//! verification mismatch.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;

pub mod commands;
pub mod config;
mod output;

pub use config::{ConfigError, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FORBIDDEN: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

const DEFAULT_STEPS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "radex",
    version,
    about = "Exact solutions and symmetry checks for a rational difference system"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// JSON configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Number of steps (or horizon) to evaluate.
    #[arg(long, global = true, visible_alias = "horizon")]
    pub steps: Option<usize>,

    /// Output format; defaults to $RADEX_FORMAT, then the config, then csv.
    #[arg(long, global = true, value_enum, env = "RADEX_FORMAT")]
    pub format: Option<Format>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Iterate the system exactly.
    Simulate,
    /// Evaluate an explicit solution family.
    ClosedForm {
        /// auto, general, constant, unit, nonunit or neg-unit.
        #[arg(long, default_value = "auto")]
        family: String,
        /// Indices as `a..b` (inclusive), `m`, or a comma-separated list.
        #[arg(long)]
        indices: Option<String>,
    },
    /// Compare direct iteration with every applicable closed form and the reduction.
    Compare {
        /// Perturb one closed-form value (harness self-test).
        #[arg(long, hide = true)]
        corrupt_fixture: bool,
    },
    /// Check a symmetry generator exactly.
    VerifySymmetry {
        /// x2, x1-paper, x1-corrected, custom or all.
        #[arg(long, default_value = "x2")]
        generator: String,
        /// c0 of a custom generator.
        #[arg(long, allow_hyphen_values = true)]
        c0: Option<String>,
        /// c1 of a custom generator.
        #[arg(long, allow_hyphen_values = true)]
        c1: Option<String>,
        /// Number of random points for the symmetry condition.
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Locate the first vanishing denominator.
    Forbidden,
    /// Invariants from the trajectory, the linear recurrence and the closed form.
    Reduce,
}

/// Everything a command produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    pub(crate) fn usage(message: impl Into<String>) -> Self {
        Outcome {
            stdout: String::new(),
            stderr: message.into(),
            code: EXIT_USAGE,
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let rendered = err.render().to_string();
            return match err.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome {
                        stdout: rendered,
                        stderr: String::new(),
                        code: EXIT_OK,
                    }
                }
                _ => Outcome::usage(rendered),
            };
        }
    };
    let Some(path) = cli.config.as_ref() else {
        return Outcome::usage("error: --config FILE is required\n");
    };
    let config = match RunConfig::from_path(path) {
        Ok(config) => config,
        Err(err) => return Outcome::usage(format!("error: {err}\n")),
    };
    let format = cli.format.or(config.defaults.format).unwrap_or(Format::Csv);
    let steps = cli
        .steps
        .or(config.defaults.horizon)
        .unwrap_or(DEFAULT_STEPS);

    match &cli.command {
        Command::Simulate => commands::simulate(&config, steps, format),
        Command::ClosedForm { family, indices } => {
            commands::closed_form(&config, family, indices.as_deref(), steps, format)
        }
        Command::Compare { corrupt_fixture } => {
            commands::compare(&config, steps, format, *corrupt_fixture)
        }
        Command::VerifySymmetry {
            generator,
            c0,
            c1,
            samples,
            seed,
        } => commands::verify_symmetry(
            &config,
            generator,
            c0.as_deref(),
            c1.as_deref(),
            *samples,
            *seed,
            steps,
            format,
        ),
        Command::Forbidden => commands::forbidden(&config, steps, format),
        Command::Reduce => commands::reduce(&config, steps, format),
    }
}
