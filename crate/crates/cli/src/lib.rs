//! The `seedlex` command line.
//!
//! Each subcommand is a plain function taking its parsed arguments plus the
//! streams it talks to, so tests drive them without spawning a process.
//! Failures carry one of the fixed exit codes in [`Exit`].

pub mod bootstrap;
pub mod commands;
pub mod config;
pub mod plot;

use std::fmt;
use std::io::{BufRead, Write};

use clap::{Parser, Subcommand};

pub use bootstrap::{cmd_bootstrap, BootstrapArgs};
pub use commands::{cmd_evaluate, cmd_export, cmd_index, cmd_plot, cmd_serve};
pub use commands::{EvaluateArgs, ExportArgs, IndexArgs, PlotArgs, ServeArgs};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    Io = 1,
    Input = 2,
    Coverage = 3,
    Lookup = 4,
    Bind = 5,
}

impl Exit {
    pub fn code(self) -> u8 {
        self as u8
    }
}

#[derive(Debug)]
pub struct CliError {
    pub exit: Exit,
    pub error: anyhow::Error,
}

impl CliError {
    pub fn new(exit: Exit, error: impl Into<anyhow::Error>) -> Self {
        CliError { exit, error: error.into() }
    }

    pub fn msg(exit: Exit, message: impl fmt::Display) -> Self {
        CliError { exit, error: anyhow::anyhow!("{message}") }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#}", self.error)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::new(Exit::Io, e)
    }
}

pub type CliResult<T = ()> = Result<T, CliError>;

pub(crate) trait OrExit<T> {
    fn or_exit(self, exit: Exit) -> CliResult<T>;
}

impl<T, E: Into<anyhow::Error>> OrExit<T> for Result<T, E> {
    fn or_exit(self, exit: Exit) -> CliResult<T> {
        self.map_err(|e| CliError::new(exit, e))
    }
}

#[derive(Parser, Debug)]
#[command(name = "seedlex", version, about = "Grow category lexicons from a corpus and a few seed words")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Index a corpus directory into a cache file
    Index(IndexArgs),
    /// Rank candidate category members for one or more seed lists
    Bootstrap(BootstrapArgs),
    /// Compute acquisition curves from judge ratings
    Evaluate(EvaluateArgs),
    /// Export accepted words for a category
    Export(ExportArgs),
    /// Serve the review API over the current rankings
    Serve(ServeArgs),
    /// Render curve files as an SVG chart
    Plot(PlotArgs),
}

/// Runs one parsed command. `input` is only read by `bootstrap --confirm-promotions`.
pub fn run(cli: Cli, input: &mut (dyn BufRead + Send), out: &mut (dyn Write + Send)) -> CliResult {
    match cli.command {
        Command::Index(a) => cmd_index(&a, out),
        Command::Bootstrap(a) => cmd_bootstrap(&a, input, out).map(|_| ()),
        Command::Evaluate(a) => cmd_evaluate(&a, out),
        Command::Export(a) => cmd_export(&a, out),
        Command::Serve(a) => cmd_serve(&a, out),
        Command::Plot(a) => cmd_plot(&a, out),
    }
}

// The guide's service and command-line chapters need this crate's dependencies.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/review-service.md")]
    mod review_service {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
