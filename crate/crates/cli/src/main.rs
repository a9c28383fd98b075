//! Command-line front end: each subcommand runs one stage of the engine and
//! prints a deterministic report, or a JSON document with `--json`.
//!
//! Exit codes: 0 success, 1 parse error, 2 precondition violation,
//! 3 internal invariant failure (including a document that fails `verify`).

mod commands;
mod doc;
mod verify;

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dynclosure::{Error, Tower};

#[derive(Parser)]
#[command(
    name = "dynclosure",
    version,
    about = "Dynamic evaluation over the algebraic closure of Q"
)]
struct Cli {
    /// Emit a JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct TowerArg {
    /// Base algebra as comma-separated `name:minpoly` pairs, e.g. "a:a^2-2,b:b^2-a".
    #[arg(long, default_value = "")]
    tower: String,
}

#[derive(Subcommand)]
enum Command {
    /// Quasi-inverse x* of an element, with the idempotent x x*.
    Qinv {
        #[command(flatten)]
        tower: TowerArg,
        /// Element; read from stdin when omitted.
        expr: Option<String>,
    },
    /// Strict Bezout gcd of two polynomials in X.
    Gcd {
        #[command(flatten)]
        tower: TowerArg,
        /// Two polynomials; read one per line from stdin when omitted.
        polys: Vec<String>,
    },
    /// Separable associate of a monic polynomial in X.
    Sqfree {
        #[command(flatten)]
        tower: TowerArg,
        poly: Option<String>,
    },
    /// Linear factorization of a monic polynomial in X.
    Factor {
        #[command(flatten)]
        tower: TowerArg,
        poly: Option<String>,
    },
    /// Puiseux expansions of the branches of a curve G(X, Y), monic in Y.
    Puiseux {
        /// Truncation order in the expansion variable.
        #[arg(long, default_value_t = 6)]
        order: usize,
        curve: Option<String>,
    },
    /// Re-checks every identity in a document written with --json.
    Verify { file: PathBuf },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Engine(#[from] Error),
    #[error("invalid document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Usage(String),
    #[error("invalid document: {0}")]
    Document(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Engine(
                Error::Parse { .. }
                | Error::NotPolynomial(_)
                | Error::UnknownGenerator(_)
                | Error::DuplicateGenerator(_),
            )
            | CliError::Json(_)
            | CliError::Io(_)
            | CliError::Document(_) => 1,
            CliError::Engine(Error::Invariant(_)) | CliError::Failed(_) => 3,
            CliError::Engine(_) | CliError::Usage(_) => 2,
        }
    }
}

fn stdin_lines() -> Result<Vec<String>, CliError> {
    let mut s = String::new();
    std::io::stdin().read_to_string(&mut s)?;
    Ok(s.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(String::from)
        .collect())
}

fn one_input(arg: Option<String>) -> Result<String, CliError> {
    match arg {
        Some(s) => Ok(s),
        None => {
            let lines = stdin_lines()?;
            match <[String; 1]>::try_from(lines) {
                Ok([s]) => Ok(s),
                Err(_) => Err(CliError::Usage("expected one expression on stdin".into())),
            }
        }
    }
}

fn run(cli: Cli) -> Result<String, CliError> {
    let tower = |t: &TowerArg| Tower::parse_spec(&t.tower);
    let report = match cli.command {
        Command::Qinv { tower: t, expr } => commands::qinv(&tower(&t)?, &one_input(expr)?)?,
        Command::Gcd { tower: t, polys } => {
            let polys = if polys.is_empty() {
                stdin_lines()?
            } else {
                polys
            };
            let [a, b] = <[String; 2]>::try_from(polys)
                .map_err(|_| CliError::Usage("gcd takes exactly two polynomials".into()))?;
            commands::gcd(&tower(&t)?, &a, &b)?
        }
        Command::Sqfree { tower: t, poly } => commands::sqfree(&tower(&t)?, &one_input(poly)?)?,
        Command::Factor { tower: t, poly } => commands::factor(&tower(&t)?, &one_input(poly)?)?,
        Command::Puiseux { order, curve } => commands::puiseux(&one_input(curve)?, order)?,
        Command::Verify { file } => {
            let text = std::fs::read_to_string(&file)?;
            let doc: doc::Document = serde_json::from_str(&text)?;
            let outcome = verify::verify(&doc)?;
            if !outcome.failures.is_empty() {
                return Err(CliError::Failed(format!(
                    "{} of {} checks failed:\n{}",
                    outcome.failures.len(),
                    outcome.checked,
                    outcome.failures.join("\n")
                )));
            }
            return Ok(format!("ok: {} checks passed\n", outcome.checked));
        }
    };
    if cli.json {
        let mut s = serde_json::to_string_pretty(&report.doc)?;
        s.push('\n');
        Ok(s)
    } else {
        Ok(report.text)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
