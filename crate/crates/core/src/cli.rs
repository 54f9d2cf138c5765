//! Command-line front end.
//!
//! Exit codes: 0 all verified, 1 verification mismatch, 2 unsupported
//! pattern, 3 invalid input.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::field::Tower;
use crate::repair::{plan, FailurePattern};
use crate::report;
use crate::rs::{Message, RsCode};
use crate::simnet::{run_repair, seeded_messages, sweep, verify_against_oracle, MessageSource};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_UNSUPPORTED: i32 = 2;
pub const EXIT_INVALID: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "coop-repair",
    version,
    about = "Cooperative trace repair of Reed-Solomon codes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the field tower, its moduli and the canonical delta and gammas.
    FieldInfo {
        #[arg(long)]
        field: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Print the repair plan for an erasure pattern without running it.
    Plan {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        erased: Vec<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Encode a message, erase, repair and check against interpolation.
    Repair {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        erased: Vec<usize>,
        /// Message coefficients, constant term first; random if omitted.
        #[arg(long, value_delimiter = ',', conflicts_with = "seed")]
        message: Option<Vec<String>>,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Repair every pattern of r erasures for a set of messages.
    Sweep {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long)]
        r: usize,
        #[arg(long, conflicts_with = "exhaustive")]
        seed: Option<u64>,
        /// Number of seeded messages per pattern.
        #[arg(long, default_value_t = 10, conflicts_with = "exhaustive")]
        count: usize,
        /// Use every message of the code.
        #[arg(long)]
        exhaustive: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Args)]
struct CodeArgs {
    /// Field tower, e.g. "gf(2^4)/gf(2)".
    #[arg(long)]
    field: String,
    /// Code length; defaults to the number of evaluation points.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: usize,
    /// Evaluation points; defaults to the first n field elements.
    #[arg(long, value_delimiter = ',')]
    points: Option<Vec<String>>,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
    Csv,
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Unsupported { .. } => EXIT_UNSUPPORTED,
            Error::OracleMismatch { .. }
            | Error::InvalidPlan(_)
            | Error::Dataflow(_)
            | Error::GammaSystem(_)
            | Error::Internal(_) => EXIT_MISMATCH,
            _ => EXIT_INVALID,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INVALID,
        message: message.into(),
    }
}

/// A rendered report and the exit code it implies.
struct Output {
    text: String,
    code: i32,
}

impl CodeArgs {
    fn build(&self) -> Result<RsCode, Failure> {
        let field = Arc::new(Tower::from_spec(&self.field)?);
        let code = match &self.points {
            Some(pts) => {
                let points = pts
                    .iter()
                    .map(|s| field.parse(s))
                    .collect::<Result<Vec<_>, _>>()?;
                if self.n.is_some_and(|n| n != points.len()) {
                    return Err(invalid(format!(
                        "--n does not match the {} points given",
                        points.len()
                    )));
                }
                RsCode::new(field, points, self.k)?
            }
            None => {
                let n = self.n.unwrap_or(field.order() as usize);
                RsCode::with_prefix(field, n, self.k)?
            }
        };
        code.require_feasible()?;
        Ok(code)
    }
}

fn render<T: serde::Serialize>(
    format: Format,
    value: &T,
    table: impl FnOnce(&T) -> String,
) -> Result<String, Failure> {
    match format {
        Format::Table => Ok(table(value)),
        Format::Json => Ok(report::to_json(value)),
        Format::Csv => Err(invalid("csv output is available for repair and sweep only")),
    }
}

fn execute(command: Command) -> Result<(Output, OutputArgs), Failure> {
    match command {
        Command::FieldInfo { field, output } => {
            let info = report::field_info(&Tower::from_spec(&field)?)?;
            let text = render(output.format, &info, report::field_info_table)?;
            Ok((
                Output {
                    text,
                    code: EXIT_OK,
                },
                output,
            ))
        }
        Command::Plan {
            code,
            erased,
            output,
        } => {
            let code = code.build()?;
            let plan = plan(&code, &FailurePattern::new(&code, &erased)?)?;
            let rep = report::plan_report(&code, &plan);
            let text = render(output.format, &rep, report::plan_table)?;
            Ok((
                Output {
                    text,
                    code: EXIT_OK,
                },
                output,
            ))
        }
        Command::Repair {
            code,
            erased,
            message,
            seed,
            output,
        } => {
            let code = code.build()?;
            let plan = plan(&code, &FailurePattern::new(&code, &erased)?)?;
            let msg = match message {
                Some(m) => Message(
                    m.iter()
                        .map(|s| code.field().parse(s))
                        .collect::<Result<Vec<_>, _>>()?,
                ),
                None => seeded_messages(&code, seed.unwrap_or(0), 1).remove(0),
            };
            let codeword = code.encode(&msg)?;
            let transcript = run_repair(&code, &codeword, &plan)?;
            let oracle = verify_against_oracle(&code, &codeword, &transcript)?;
            let rep = report::repair_report(&code, &plan, &msg, &codeword, &transcript, &oracle);
            let text = match output.format {
                Format::Csv => report::repair_csv(&rep),
                f => render(f, &rep, report::repair_table)?,
            };
            let code = if rep.ok { EXIT_OK } else { EXIT_MISMATCH };
            Ok((Output { text, code }, output))
        }
        Command::Sweep {
            code,
            r,
            seed,
            count,
            exhaustive,
            output,
        } => {
            let code = code.build()?;
            let source = if exhaustive {
                MessageSource::Exhaustive
            } else {
                MessageSource::Seeded {
                    seed: seed.unwrap_or(0),
                    count,
                }
            };
            let rep = sweep(&code, r, &source)?;
            let summary = report::sweep_summary(&code, &rep);
            let text = match output.format {
                Format::Csv => report::sweep_csv(&summary),
                f => render(f, &summary, report::sweep_table)?,
            };
            let code = if summary.ok { EXIT_OK } else { EXIT_MISMATCH };
            Ok((Output { text, code }, output))
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code. Reports go to `stdout` or the `--out` file.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
            let target: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match execute(cli.command) {
        Ok((out, args)) => {
            let written = match &args.out {
                Some(path) => std::fs::write(path, &out.text),
                None => stdout.write_all(out.text.as_bytes()),
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "error: cannot write report: {e}");
                return EXIT_INVALID;
            }
            out.code
        }
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}
