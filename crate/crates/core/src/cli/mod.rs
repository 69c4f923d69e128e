//! The `exformal` command line: run JSON scenarios, print the
//! correspondence table, check single expressions.

mod output;
mod scenario;
mod task;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::catalog::{correspondence_table, Conventions};
use crate::symbolic::{parse_with, simplify, Chart, SamplingPolicy, SymbolTable, DEFAULT_SEED};

pub use output::{RunReport, TaskRecord};
pub use scenario::{InputError, Scenario};
pub use task::{is_success, meets_expectation, Outcome, Task, TASK_OPS};

pub const SEED_ENV: &str = "EXFORMAL_SEED";

#[derive(Debug, Parser)]
#[command(name = "exformal", version, about = "Symbolic exterior-calculus verifier")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run every task in a scenario file.
    Run {
        file: PathBuf,
        /// Sampling seed; falls back to $EXFORMAL_SEED, then the built-in default.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Treat undecided zero tests as failures.
        #[arg(long)]
        strict: bool,
        /// Run tasks on the rayon pool; output order is unchanged.
        #[arg(long)]
        parallel: bool,
    },
    /// Print the degree/interaction correspondence table.
    Table {
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Parse and simplify one expression.
    CheckExpr {
        expr: String,
        /// Comma-separated coordinate names.
        #[arg(long, value_delimiter = ',', required = true)]
        chart: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        params: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        functions: Vec<String>,
    },
}

fn resolve_seed(flag: Option<u64>) -> Result<u64, InputError> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| InputError::Validation(format!("{SEED_ENV}=`{v}` is not an unsigned integer"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

/// Load, validate and run a scenario. Input problems are reported before
/// any task executes.
pub fn run_scenario(
    text: &str,
    seed: u64,
    strict: bool,
    parallel: bool,
) -> Result<RunReport, InputError> {
    let policy = SamplingPolicy::with_seed(seed);
    let sc = Scenario::from_json(text, &policy)?;
    let tasks = sc
        .tasks
        .iter()
        .enumerate()
        .map(|(i, raw)| Task::prepare(i, raw, &sc))
        .collect::<Result<Vec<_>, _>>()?;
    let outcomes: Vec<Outcome> = if parallel {
        tasks.par_iter().map(|t| t.run(&policy)).collect()
    } else {
        tasks.iter().map(|t| t.run(&policy)).collect()
    };
    let records: Vec<TaskRecord> = tasks
        .into_iter()
        .zip(outcomes)
        .map(|(t, o)| {
            let ok = match &t.expect {
                Some(e) => meets_expectation(e, &o),
                None => is_success(&o.verdict) || (!strict && o.verdict == "Unknown"),
            };
            TaskRecord {
                index: t.index,
                op: t.op_name,
                label: t.label,
                expect: t.expect,
                verdict: o.verdict,
                ok,
                details: o.details,
            }
        })
        .collect();
    let ok = records.iter().all(|r| r.ok);
    Ok(RunReport {
        version: env!("CARGO_PKG_VERSION"),
        seed,
        conventions: Conventions::engine(),
        tasks: records,
        ok,
    })
}

/// Entry point shared by the binary and the tests. Returns the process exit
/// code: 0 when every task succeeds, 1 when a task fails, 2 on bad input.
pub fn run_cli<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                write!(stdout, "{rendered}")
            } else {
                write!(stderr, "{rendered}")
            };
            return code;
        }
    };
    match cli.command {
        Command::Run {
            file,
            seed,
            format,
            strict,
            parallel,
        } => {
            let report = resolve_seed(seed).and_then(|seed| {
                let text = std::fs::read_to_string(&file)
                    .map_err(|_| InputError::FileNotFound(file.display().to_string()))?;
                run_scenario(&text, seed, strict, parallel)
            });
            match report {
                Ok(r) => {
                    let body = match format {
                        Format::Text => r.to_text(),
                        Format::Json => r.to_json(),
                    };
                    let _ = stdout.write_all(body.as_bytes());
                    if r.ok {
                        0
                    } else {
                        1
                    }
                }
                Err(e) => input_failure(&e, stderr),
            }
        }
        Command::Table { format } => {
            let table = correspondence_table();
            let body = match format {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&table).expect("table serializes");
                    s.push('\n');
                    s
                }
                Format::Text => {
                    let mut s = String::new();
                    for e in &table {
                        s.push_str(&format!("{e}\n       {}\n", e.note));
                    }
                    s
                }
            };
            let _ = stdout.write_all(body.as_bytes());
            0
        }
        Command::CheckExpr {
            expr,
            chart,
            params,
            functions,
        } => {
            let chart = match Chart::new(&chart) {
                Ok(c) => c,
                Err(e) => return input_failure(&InputError::Validation(format!("chart: {e}")), stderr),
            };
            let table = SymbolTable::new(&chart, &params, &functions);
            match parse_with(&expr, &table) {
                Ok(e) => {
                    let _ = writeln!(stdout, "{}", simplify(&e));
                    0
                }
                Err(source) => input_failure(
                    &InputError::Expression {
                        context: "expression".into(),
                        source,
                    },
                    stderr,
                ),
            }
        }
    }
}

fn input_failure(e: &InputError, stderr: &mut dyn Write) -> i32 {
    let _ = writeln!(stderr, "{}: {e}", e.kind());
    2
}
