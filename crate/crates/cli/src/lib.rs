//! `aspectsc`: command-line access to the engine and the model checker.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use aspect_validator::Formalism;

mod commands;

pub const TOOL: &str = "aspectsc";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_FINDING: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum QueryMode {
    /// Regression through aspects and `d`.
    Aspect,
    /// Successor state axioms.
    Ssa,
    /// Forward progression.
    Oracle,
}

#[derive(Parser, Debug)]
#[command(name = TOOL, version, about = "Aspect-annotated situation calculus: frames, queries and model checking")]
pub struct Cli {
    /// Output form of the report.
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub report: ReportFormat,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Load a domain, check its aspects against the effects and lint `d`.
    Check {
        domain: PathBuf,
        /// Check the states reachable from this initial state instead of
        /// every assignment.
        #[arg(long)]
        init: Option<PathBuf>,
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    /// Derive frame axioms and the economy figures.
    Frames {
        domain: PathBuf,
        /// Comma-separated objects to keep in every sort.
        #[arg(long, value_delimiter = ',')]
        universe: Option<Vec<String>>,
        /// Also list the ground axioms.
        #[arg(long)]
        ground: bool,
    },
    /// Progress a state through a sequence of actions.
    Simulate {
        domain: PathBuf,
        /// Initial state file; defaults to the domain file with extension `.init`.
        #[arg(long)]
        init: Option<PathBuf>,
        /// Actions separated by `;`.
        #[arg(long, default_value = "")]
        acts: String,
    },
    /// Answer a fluent after a sequence of actions.
    Query {
        domain: PathBuf,
        #[arg(long)]
        init: Option<PathBuf>,
        #[arg(long, default_value = "")]
        acts: String,
        #[arg(long)]
        fluent: String,
        #[arg(long, value_enum, default_value = "aspect")]
        mode: QueryMode,
    },
    /// Run a workload in every mode and compare answers and costs.
    Compare {
        domain: PathBuf,
        #[arg(long)]
        workload: PathBuf,
    },
    /// Check a finite model against one formalism.
    Validate {
        model: PathBuf,
        #[arg(long)]
        formalism: Formalism,
    },
    /// Look for a counterexample among small and random models.
    Search {
        formalism: Formalism,
        #[arg(long, default_value_t = 8)]
        max_situations: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random models per formalism.
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        /// Largest size enumerated exhaustively.
        #[arg(long, default_value_t = 3)]
        exhaustive_up_to: usize,
    },
    /// Reproduce the commutativity pitfall with both disjointness choices.
    Pitfall {
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

/// What a command produced.
pub struct Outcome {
    pub report: Value,
    pub text: String,
    /// A soundness violation or counterexample was found.
    pub finding: bool,
    pub seed: Option<u64>,
}

/// Bad input: unreadable file, parse error, inconsistent model.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct InputError(pub String);

#[derive(Serialize)]
struct Envelope<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    seed: Option<u64>,
    exit_code: i32,
    report: &'a Value,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Check { .. } => "check",
            Command::Frames { .. } => "frames",
            Command::Simulate { .. } => "simulate",
            Command::Query { .. } => "query",
            Command::Compare { .. } => "compare",
            Command::Validate { .. } => "validate",
            Command::Search { .. } => "search",
            Command::Pitfall { .. } => "pitfall",
        }
    }
}

/// Runs one invocation. Reports go to `out`, diagnostics to `err`.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let name = cli.command.name();
    match commands::dispatch(&cli.command, err) {
        Ok(o) => {
            let code = if o.finding { EXIT_FINDING } else { EXIT_OK };
            let written = match cli.report {
                ReportFormat::Text => out.write_all(o.text.as_bytes()),
                ReportFormat::Json => {
                    let env = Envelope { tool: TOOL, version: VERSION, command: name, seed: o.seed, exit_code: code, report: &o.report };
                    let mut s = serde_json::to_string_pretty(&env).expect("reports serialize");
                    s.push('\n');
                    out.write_all(s.as_bytes())
                }
            };
            if let Err(e) = written {
                let _ = writeln!(err, "error: cannot write report: {e}");
                return EXIT_INPUT;
            }
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}
