//! Command-line front end. [`run`] parses an argument vector, dispatches to
//! the library and returns the exit code with the text for both streams, so
//! the binary and the tests share one code path.

mod args;
mod exec;
mod input;
pub mod verify;

use std::ffi::OsString;
use std::io::Read;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::{json, Value};

pub use args::Cli;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CONSISTENCY: i32 = 3;

/// Name of the environment variable overriding default tolerances.
pub const TOL_ENV: &str = "COXSPEC_TOL";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandOutcome {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Process-independent inputs: standard input and the tolerance override.
#[derive(Debug, Clone, Default)]
pub struct Environment {
    pub stdin: Option<String>,
    pub tol: Option<String>,
}

impl Environment {
    /// Reads `COXSPEC_TOL` now; standard input is read only when a command
    /// names `-` as its graph.
    pub fn from_process() -> Self {
        Environment {
            stdin: None,
            tol: std::env::var(TOL_ENV).ok(),
        }
    }
}

#[derive(Debug)]
pub(crate) enum CliError {
    Usage(String),
    Domain(String),
    Consistency(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Domain(_) => EXIT_DOMAIN,
            CliError::Consistency(_) => EXIT_CONSISTENCY,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Domain(m) | CliError::Consistency(m) => m,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Domain(_) => "domain",
            CliError::Consistency(_) => "internal-consistency",
        }
    }
}

/// A finished command: its text and JSON renderings and an exit code, which
/// is nonzero when a verification inside the command failed.
pub(crate) struct Report {
    pub text: String,
    pub json: Value,
    pub exit_code: i32,
}

impl Report {
    pub fn ok(text: String, json: Value) -> Self {
        Report {
            text,
            json,
            exit_code: EXIT_OK,
        }
    }

    pub fn checked(text: String, json: Value, passed: bool) -> Self {
        Report {
            text,
            json,
            exit_code: if passed { EXIT_OK } else { EXIT_CONSISTENCY },
        }
    }
}

/// Runs with the process environment; reads standard input on demand.
pub fn run<I, T>(argv: I) -> CommandOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let mut env = Environment::from_process();
    let args: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    if args.iter().any(|a| a == "-") {
        let mut text = String::new();
        if std::io::stdin().read_to_string(&mut text).is_ok() {
            env.stdin = Some(text);
        }
    }
    run_with(args, &env)
}

/// Runs against an explicit environment. `argv[0]` is the program name.
pub fn run_with<I, T>(argv: I, env: &Environment) -> CommandOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => CommandOutcome {
                    exit_code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => CommandOutcome {
                    exit_code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    let json = exec::wants_json(&cli.command);
    match exec::dispatch(&cli.command, env) {
        Ok(report) => {
            let stdout = if json {
                render_json(&report.json)
            } else {
                ensure_newline(report.text)
            };
            let stderr = if report.exit_code == EXIT_OK {
                String::new()
            } else {
                "error: verification failed\n".to_string()
            };
            CommandOutcome {
                exit_code: report.exit_code,
                stdout,
                stderr,
            }
        }
        Err(err) => {
            let stdout = if json {
                render_json(&json!({ "error": { "kind": err.kind(), "message": err.message() } }))
            } else {
                String::new()
            };
            CommandOutcome {
                exit_code: err.exit_code(),
                stdout,
                stderr: format!("error: {}\n", err.message()),
            }
        }
    }
}

fn render_json(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values serialize");
    s.push('\n');
    s
}

fn ensure_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}
