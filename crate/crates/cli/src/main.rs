use std::io::{self, BufRead, Write};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use stanley_core::syntax::at_line;
use stanley_core::Error;

mod request;

use request::{run, Command, Report, Request, Usage};

/// Stanley decompositions, Stanley depth, fdepth and Hilbert series of
/// monomial quotients I/J over K[x1, ..., xn] with some variables inverted.
#[derive(Parser)]
#[command(name = "stanley", version)]
struct Cli {
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,

    /// Worker threads for parallel checks (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Sub,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Sub {
    /// Minimal generators of I (and J) in the localized ring.
    Normalize(Flags),
    /// Stanley depth of I/J.
    Sdepth(Flags),
    /// A Stanley decomposition of I/J of maximal sdepth.
    Decompose(Flags),
    /// Localize a decomposition D of I/J at the variables in A.
    Localize(Flags),
    /// Hilbert series of I/J, checked against direct counts.
    Hilbert(Flags),
    /// Check that D is a Stanley decomposition of I/J.
    Verify(Flags),
    /// fdepth of I/J with a prime filtration attaining it.
    Fdepth(Flags),
    /// Read one JSON request per line from stdin, write one JSON report per line.
    Batch,
}

#[derive(Args)]
struct Flags {
    /// Ring, e.g. "n=3 invert={2,3}".
    #[arg(long)]
    ring: String,
    #[arg(long = "I")]
    i: Option<String>,
    /// Defaults to (0).
    #[arg(long = "J")]
    j: Option<String>,
    /// Decomposition, e.g. "x * K[x, y] + 1 * K[y^-1]".
    #[arg(long = "D")]
    d: Option<String>,
    /// Variables to invert, e.g. "{1,3}".
    #[arg(long = "A")]
    a: Option<String>,
    /// Node budget for the sdepth and fdepth searches.
    #[arg(long)]
    budget: Option<u64>,
    /// Print the decomposition or filtration attaining the value.
    #[arg(long)]
    witness: bool,
    #[arg(long, default_value_t = 10)]
    max_degree: usize,
    /// Override the verification clamp bound; must be at least the computed one.
    #[arg(long)]
    box_bound: Option<i64>,
}

impl Flags {
    fn into_request(self, command: Command) -> Request {
        Request {
            command,
            ring: self.ring,
            i: self.i,
            j: self.j,
            d: self.d,
            a: self.a,
            budget: self.budget,
            witness: self.witness,
            max_degree: self.max_degree,
            box_bound: self.box_bound,
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<Usage>().is_some() {
        return 1;
    }
    match err.downcast_ref::<Error>() {
        Some(Error::BudgetExceeded(_)) => 3,
        Some(e) if e.is_mathematical() => 2,
        _ => 1,
    }
}

fn message(err: &anyhow::Error) -> String {
    format!("{err:#}")
}

fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Text => report.text.clone(),
        Format::Json => report.json.to_string(),
    }
}

fn batch() -> Result<u8> {
    let stdin = io::stdin();
    let mut out = io::stdout().lock();
    let mut worst = 0u8;
    for (k, line) in stdin.lock().lines().enumerate() {
        let line = line.context("reading stdin")?;
        if line.trim().is_empty() {
            continue;
        }
        let result = serde_json::from_str::<Request>(&line)
            .map_err(|e| anyhow::Error::new(Usage(format!("line {}: {e}", k + 1))))
            .and_then(|req| run(&req).map_err(|e| relocate(e, k + 1)));
        let value = match result {
            Ok(report) => report.json,
            Err(e) => {
                let code = exit_code(&e);
                worst = worst.max(code);
                json!({ "error": message(&e), "exit": code, "line": k + 1 })
            }
        };
        writeln!(out, "{value}")?;
    }
    Ok(worst)
}

/// Parse errors inside a batch line are reported on that line.
fn relocate(err: anyhow::Error, line: usize) -> anyhow::Error {
    let Some(e @ Error::Parse { .. }) = err.downcast_ref::<Error>() else {
        return err;
    };
    let moved = at_line(e.clone(), line);
    if err.chain().count() == 1 {
        moved.into()
    } else {
        anyhow::Error::new(moved).context(err.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let (command, flags) = match cli.command {
        Sub::Batch => {
            return match batch() {
                Ok(code) => ExitCode::from(code),
                Err(e) => {
                    eprintln!("error: {e:#}");
                    ExitCode::from(1)
                }
            };
        }
        Sub::Normalize(f) => (Command::Normalize, f),
        Sub::Sdepth(f) => (Command::Sdepth, f),
        Sub::Decompose(f) => (Command::Decompose, f),
        Sub::Localize(f) => (Command::Localize, f),
        Sub::Hilbert(f) => (Command::Hilbert, f),
        Sub::Verify(f) => (Command::Verify, f),
        Sub::Fdepth(f) => (Command::Fdepth, f),
    };
    match run(&flags.into_request(command)) {
        Ok(report) => {
            println!("{}", render(&report, cli.format));
            ExitCode::SUCCESS
        }
        Err(e) => {
            let code = exit_code(&e);
            match cli.format {
                Format::Text => eprintln!("error: {}", message(&e)),
                Format::Json => println!("{}", json!({ "error": message(&e), "exit": code })),
            }
            ExitCode::from(code)
        }
    }
}
