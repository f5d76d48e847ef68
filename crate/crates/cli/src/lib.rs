//! Command implementations behind the `lexfst` binary.

pub mod artifact;
mod dot;

use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use lexfst::analysis::{check_coloring, find_weight_conflicts, ConflictWitness, InterleaveSpec};
use lexfst::text::quote;
use lexfst::{compile, parse, Evaluator, Policy, Symbol, Transducer};

pub use dot::to_dot;

pub const REJECT: &str = "<<REJECT>>";

/// Process exit statuses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum Status {
    Ok = 0,
    Syntax = 1,
    Ambiguity = 2,
    Coloring = 3,
    Io = 4,
    RuntimeAmbiguity = 5,
    Conflicts = 6,
}

#[derive(Debug, Parser)]
#[command(
    name = "lexfst",
    version,
    about = "Compile and run weighted output regular expressions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    Min,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Dot,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compile an expression file to a machine artifact.
    Compile {
        input: PathBuf,
        /// Interleaved-alphabet spec to validate against.
        #[arg(short = 'a', long = "alphabets")]
        alphabets: Option<PathBuf>,
        #[arg(short, long, value_enum, default_value = "max")]
        policy: PolicyArg,
        /// Treat weight conflicts as errors.
        #[arg(long)]
        strict: bool,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Evaluate a machine on one input or on each line of stdin.
    Run {
        artifact: PathBuf,
        #[arg(long, conflicts_with = "stdin", required_unless_present = "stdin")]
        input: Option<String>,
        #[arg(long)]
        stdin: bool,
    },
    /// Report functionality and alphabet validity.
    Check {
        artifact: PathBuf,
        #[arg(short = 'a', long = "alphabets")]
        alphabets: Option<PathBuf>,
    },
    /// Print a graph description of a machine.
    Export {
        artifact: PathBuf,
        #[arg(long, value_enum, default_value = "dot")]
        format: Format,
    },
}

struct Failure(Status, String);

type Outcome = Result<Status, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure(Status::Io, format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Transducer, Failure> {
    artifact::load(&read(path)?)
        .map_err(|e| Failure(Status::Io, format!("{}: {e}", path.display())))
}

fn load_spec(path: &Path) -> Result<InterleaveSpec, Failure> {
    InterleaveSpec::parse(&read(path)?)
        .map_err(|e| Failure(Status::Syntax, format!("{}: {e}", path.display())))
}

fn io_fail(e: io::Error) -> Failure {
    Failure(Status::Io, e.to_string())
}

/// Runs one command. Normal output goes to `out`, diagnostics to `err`.
pub fn run(cli: Cli, input: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> Status {
    let outcome = match cli.command {
        Command::Compile {
            input,
            alphabets,
            policy,
            strict,
            output,
        } => cmd_compile(
            &input,
            alphabets.as_deref(),
            policy,
            strict,
            &output,
            out,
            err,
        ),
        Command::Run {
            artifact,
            input: s,
            stdin,
        } => {
            if stdin {
                cmd_run(&artifact, input.lines(), out, err)
            } else {
                cmd_run(&artifact, s.into_iter().map(Ok), out, err)
            }
        }
        Command::Check {
            artifact,
            alphabets,
        } => cmd_check(&artifact, alphabets.as_deref(), out),
        Command::Export {
            artifact,
            format: Format::Dot,
        } => load(&artifact).and_then(|t| {
            out.write_all(to_dot(&t).as_bytes())
                .map(|_| Status::Ok)
                .map_err(io_fail)
        }),
    };
    match outcome {
        Ok(status) => status,
        Err(Failure(status, message)) => {
            let _ = writeln!(err, "error: {message}");
            status
        }
    }
}

fn write_witnesses(w: &[ConflictWitness], prefix: &str, out: &mut dyn Write) -> io::Result<()> {
    for c in w {
        writeln!(out, "{prefix}{c}")?;
    }
    Ok(())
}

fn cmd_compile(
    input: &Path,
    alphabets: Option<&Path>,
    policy: PolicyArg,
    strict: bool,
    output: &Path,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    let text = read(input)?;
    let ast =
        parse(&text).map_err(|e| Failure(Status::Syntax, format!("{}:{e}", input.display())))?;
    let policy = match policy {
        PolicyArg::Min => Policy::Min,
        PolicyArg::Max => Policy::Max,
    };
    let machine = compile(&ast, policy).map_err(|e| Failure(Status::Ambiguity, e.to_string()))?;
    if let Some(path) = alphabets {
        let spec = load_spec(path)?;
        if let Err(violations) = check_coloring(&machine, &spec) {
            for v in &violations {
                writeln!(err, "coloring: {v}").map_err(io_fail)?;
            }
            return Err(Failure(
                Status::Coloring,
                format!("{} alphabet violation(s)", violations.len()),
            ));
        }
    }
    let conflicts = find_weight_conflicts(&machine);
    if !conflicts.is_empty() {
        let label = if strict { "error" } else { "warning" };
        write_witnesses(&conflicts, &format!("{label}: weight conflict: "), err)
            .map_err(io_fail)?;
        writeln!(
            err,
            "{label}: add weight annotations to separate the conflicting paths"
        )
        .map_err(io_fail)?;
        if strict {
            return Ok(Status::Conflicts);
        }
    }
    std::fs::write(output, artifact::save(&machine))
        .map_err(|e| Failure(Status::Io, format!("{}: {e}", output.display())))?;
    writeln!(
        out,
        "{}: {} states, {} transitions",
        output.display(),
        machine.state_count(),
        machine.transitions().len()
    )
    .map_err(io_fail)?;
    Ok(Status::Ok)
}

fn cmd_run(
    path: &Path,
    inputs: impl Iterator<Item = io::Result<String>>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    let machine = load(path)?;
    let eval = Evaluator::new(&machine);
    for line in inputs {
        let line = line.map_err(io_fail)?;
        let symbols: Vec<Symbol> = line.chars().map(Symbol::new).collect();
        match eval.evaluate(&symbols) {
            Ok(Some(o)) => writeln!(out, "{}", quote(o.symbols())),
            Ok(None) => writeln!(out, "{REJECT}"),
            Err(e) => {
                writeln!(err, "error: {}: {e}", quote(&symbols)).map_err(io_fail)?;
                return Ok(Status::RuntimeAmbiguity);
            }
        }
        .map_err(io_fail)?;
    }
    Ok(Status::Ok)
}

fn cmd_check(path: &Path, alphabets: Option<&Path>, out: &mut dyn Write) -> Outcome {
    let machine = load(path)?;
    let spec = alphabets.map(load_spec).transpose()?;
    let conflicts = find_weight_conflicts(&machine);
    let mut status = Status::Ok;
    let report = (|| -> io::Result<()> {
        if conflicts.is_empty() {
            writeln!(out, "functional: certified")?;
        } else {
            writeln!(
                out,
                "functional: unknown ({} weight conflict(s))",
                conflicts.len()
            )?;
            write_witnesses(&conflicts, "  ", out)?;
            status = Status::Conflicts;
        }
        match spec.map(|s| check_coloring(&machine, &s)) {
            None => writeln!(out, "coloring: not checked"),
            Some(Ok(())) => writeln!(out, "coloring: ok"),
            Some(Err(v)) => {
                writeln!(out, "coloring: {} violation(s)", v.len())?;
                for x in &v {
                    writeln!(out, "  {x}")?;
                }
                status = Status::Coloring;
                Ok(())
            }
        }
    })();
    report.map_err(io_fail)?;
    Ok(status)
}
