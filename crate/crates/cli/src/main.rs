//! `sympindex`: Maslov, Bott and splitting-number invariants of linear
//! symplectic paths from the command line.
//!
//! Reads one JSON problem document (from `--input` or standard input) and
//! writes one result document. Exit status: 0 success, 1 malformed input,
//! 2 numerical failure, 3 invariant violation under `--verify` or `selftest`.

mod angle;
mod commands;
mod document;
mod output;
mod selftest;

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use sympindex::{Error, ErrorClass};

use angle::Angle;
use commands::Settings;
use output::Rendered;

#[derive(Parser, Debug)]
#[command(name = "sympindex", version, about = "Maslov-type indices of linear symplectic paths")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Maslov indices (mas, comas, nul) of a path.
    Index(Common),
    /// The theta-profile of a path and its average Maslov index.
    Profile(Common),
    /// Splitting numbers at the circle eigenvalues (or at --theta).
    Splitting(Common),
    /// Indices of the iterated path with the Bott and iteration checks.
    Iterate(Common),
    /// Morse index of the discrete action against the Maslov index.
    Lagrangian(Common),
    /// Golden examples and seeded randomized checks.
    Selftest {
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct Common {
    /// Problem document; standard input when absent.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Fixed number of factors instead of the adaptive choice.
    #[arg(long)]
    k: Option<usize>,
    /// Double the number of factors that would otherwise be used.
    #[arg(long)]
    k2x: bool,
    /// Bound on the distance of each factor from the identity.
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long, conflicts_with = "p_range")]
    p: Option<usize>,
    /// Inclusive range `A..B`.
    #[arg(long, value_parser = parse_range)]
    p_range: Option<(usize, usize)>,
    /// Comma-separated angles: radians, `pi/2`, `5*pi`, `1/3 turn`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    theta: Option<Vec<Angle>>,
    /// Cross-route and k/2k checks; failures exit with status 3.
    #[arg(long)]
    verify: bool,
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    #[arg(long)]
    csv: bool,
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected A..B, got '{s}'"))?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let a: usize = a.trim().parse().map_err(|_| format!("bad lower bound in '{s}'"))?;
    let b: usize = b.trim().parse().map_err(|_| format!("bad upper bound in '{s}'"))?;
    Ok((a, b))
}

/// Failure of a run with the exit status it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e.class() {
            ErrorClass::Input => 1,
            ErrorClass::Numerical => 2,
            ErrorClass::Invariant => 3,
        };
        Failure { code, message: e.to_string() }
    }
}

fn input_failure(message: String) -> Failure {
    Failure { code: 1, message }
}

fn read_input(path: &Option<PathBuf>) -> Result<String, Failure> {
    let mut text = String::new();
    match path {
        Some(p) => {
            text = std::fs::read_to_string(p).map_err(|e| input_failure(format!("cannot read {}: {e}", p.display())))?
        }
        None => {
            std::io::stdin().read_to_string(&mut text).map_err(|e| input_failure(format!("cannot read stdin: {e}")))?;
        }
    }
    Ok(text)
}

fn write_output(path: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    let fail = |e: std::io::Error| Failure { code: 1, message: format!("cannot write output: {e}") };
    match path {
        Some(p) => std::fs::write(p, text).map_err(fail),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(fail),
    }
}

fn settings(c: &Common) -> Result<Settings, Failure> {
    let doc = document::parse_document(&read_input(&c.input)?)?;
    let tol = doc.options.tolerances.resolve()?;
    let mut doc = doc;
    if let Some(eta) = c.eta {
        doc.options.eta = Some(eta);
    }
    let opts = doc.discretize_options()?;
    let p_range = match (c.p, c.p_range, doc.options.p, doc.options.p_range) {
        (Some(p), _, _, _) => Some((p, p)),
        (_, Some(r), _, _) => Some(r),
        (_, _, Some(p), _) => Some((p, p)),
        (_, _, _, Some([a, b])) => Some((a, b)),
        _ => None,
    };
    let k = c.k.or(doc.options.k);
    if k == Some(0) {
        return Err(input_failure("k must be positive".into()));
    }
    let verify = c.verify || doc.options.verify;
    let thetas = c.theta.clone().or_else(|| doc.options.theta.clone());
    Ok(Settings { doc, tol, opts, k, k2x: c.k2x, verify, thetas, p_range })
}

fn run(cli: Cli) -> Result<(), Failure> {
    let (common, cmd): (&Common, fn(&Settings) -> Result<Rendered, Error>) = match &cli.command {
        Command::Index(c) => (c, commands::cmd_index),
        Command::Profile(c) => (c, commands::cmd_profile),
        Command::Splitting(c) => (c, commands::cmd_splitting),
        Command::Iterate(c) => (c, commands::cmd_iterate),
        Command::Lagrangian(c) => (c, commands::cmd_lagrangian),
        Command::Selftest { output } => {
            let (report, pass) = selftest::cmd_selftest();
            write_output(output, &output::render_json(&report))?;
            return if pass {
                Ok(())
            } else {
                Err(Failure { code: 3, message: "selftest failed".into() })
            };
        }
    };
    let s = settings(common)?;
    let rendered = cmd(&s)?;
    let text = match (&rendered.table, common.csv && !common.json) {
        (Some(t), true) => output::render_csv(t)?,
        _ => output::render_json(&rendered.json),
    };
    write_output(&common.output, &text)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
