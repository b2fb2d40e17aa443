//! Command-line front-end for `gradhooke`.
//!
//! Every subcommand produces a [`RunReport`](output::RunReport) rendered as
//! JSON (the default) or CSV. Exit codes: 0 success or definite, 1
//! indefinite material or solver failure, 2 marginal material, 64 usage
//! error. Parallel work is capped by `GRADHOOKE_THREADS`.

pub mod args;
mod commands;
pub mod input;
pub mod output;

use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::Parser;
use thiserror::Error;

pub use args::{Cli, Command, Format};
pub use output::RunReport;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_MARGINAL: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

pub const THREADS_ENV: &str = "GRADHOOKE_THREADS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{path}: {message}")]
    Input { path: PathBuf, message: String },

    #[error("refusing to solve: {0}")]
    Refused(String),

    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },

    #[error(transparent)]
    Library(#[from] gradhooke::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use gradhooke::Error as E;
        match self {
            CliError::Usage(_) | CliError::Input { .. } => EXIT_USAGE,
            CliError::Library(E::Geometry(_) | E::Mesh(_) | E::NotSymmetric { .. } | E::NotTraceless { .. }) => {
                EXIT_USAGE
            }
            CliError::Refused(_) | CliError::Write { .. } | CliError::Library(_) => EXIT_FAILURE,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Result of one invocation: exit code and the bytes destined for the two
/// standard streams.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: Vec<u8>,
    pub stderr: String,
}

impl Outcome {
    fn error(e: &CliError) -> Self {
        Outcome { code: e.exit_code(), stdout: Vec::new(), stderr: format!("gradhooke: {e}\n") }
    }
}

/// Runs with the thread cap taken from the environment.
pub fn run<I, S>(argv: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let threads = std::env::var(THREADS_ENV).ok();
    run_with_threads(argv, threads.as_deref())
}

/// Runs with an explicit thread cap (the raw value of `GRADHOOKE_THREADS`).
pub fn run_with_threads<I, S>(argv: I, threads: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    Outcome { code: EXIT_OK, stdout: text.into_bytes(), stderr: String::new() }
                }
                _ => Outcome { code: EXIT_USAGE, stdout: Vec::new(), stderr: text },
            };
        }
    };
    let echo: Vec<String> = argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let pool = match thread_pool(threads) {
        Ok(p) => p,
        Err(e) => return Outcome::error(&e),
    };
    let result = pool.install(|| commands::execute(&cli, echo));
    match result.and_then(|report| emit(&cli, &report).map(|bytes| (report.exit_code, bytes))) {
        Ok((code, bytes)) => Outcome { code, stdout: bytes, stderr: String::new() },
        Err(e) => Outcome::error(&e),
    }
}

fn thread_pool(threads: Option<&str>) -> Result<rayon::ThreadPool> {
    let n = match threads.map(str::trim).filter(|s| !s.is_empty()) {
        None => 0,
        Some(s) => match s.parse::<usize>() {
            Ok(n) if n > 0 => n,
            _ => return Err(CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got {s:?}"))),
        },
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {n} worker threads: {e}")))
}

/// Renders the report and writes it to `--out` when given. Returns what is
/// left for stdout.
fn emit(cli: &Cli, report: &RunReport) -> Result<Vec<u8>> {
    let bytes = match cli.format {
        Format::Json => report.to_json_bytes(),
        Format::Csv => report.to_csv_bytes(),
    };
    match &cli.out {
        None => Ok(bytes),
        Some(path) => {
            std::fs::write(path, &bytes).map_err(|source| CliError::Write { path: path.clone(), source })?;
            Ok(Vec::new())
        }
    }
}
