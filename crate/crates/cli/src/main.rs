//! Command-line surface over the certificate DSL.
//!
//! Exit codes are frozen for scripting: 0 success or checked-true, 1
//! checked-false (invalid sequence, not realizable), 2 usage or parse
//! error, 3 internal invariant broken (including an exceeded node cap).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crealize::eliminate::{eliminate_all, EliminateError};
use crealize::io::{parse_sequence, serialize_sequence, serialize_structured, SequenceDocument};
use crealize::oracle::{decide_multiset_with, decide_state_with, enumerate, SearchOptions};
use crealize::state::MoveStatus;
use crealize::swap::normalize;

const EXIT_FALSE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Parser)]
#[command(
    name = "crealize",
    version,
    about = "Validate, rewrite, and decide realizability certificates"
)]
struct Cli {
    /// Rendering for emitted sequences: the line DSL or JSON.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Cap on oracle search nodes; exceeding it exits with code 3.
    #[arg(long, global = true)]
    max_nodes: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print each move's status and the final state; exit 0 iff all valid.
    Validate { file: PathBuf },
    /// Apply every admissible move and print the final state.
    Apply { file: PathBuf },
    /// Rewrite an all-valid sequence to use only move types 1-3.
    Eliminate { file: PathBuf },
    /// Decide realizability of a single-tuple target or a multiset.
    Decide(DecideArgs),
    /// List realizable multisets of n values with magnitudes up to bound.
    Enumerate {
        n: usize,
        bound: i64,
        /// Write the list to a file instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reorder an all-valid type-1-3 sequence into canonical form.
    Normalize { file: PathBuf },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct DecideKind {
    /// Treat the values as an ordered single-tuple target.
    #[arg(long)]
    state: bool,
    /// Treat the values as a multiset and search over orderings.
    #[arg(long)]
    multiset: bool,
}

#[derive(Args)]
struct DecideArgs {
    #[command(flatten)]
    kind: DecideKind,
    /// Write the realizing sequence to this file.
    #[arg(long)]
    witness: Option<PathBuf>,
    #[arg(required = true, allow_negative_numbers = true)]
    values: Vec<i64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {}", err.msg);
            ExitCode::from(err.code)
        }
    }
}

struct CmdError {
    code: u8,
    msg: String,
}

fn usage_err(msg: impl Into<String>) -> CmdError {
    CmdError {
        code: EXIT_USAGE,
        msg: msg.into(),
    }
}

fn internal_err(msg: impl Into<String>) -> CmdError {
    CmdError {
        code: EXIT_INTERNAL,
        msg: msg.into(),
    }
}

fn false_err(msg: impl Into<String>) -> CmdError {
    CmdError {
        code: EXIT_FALSE,
        msg: msg.into(),
    }
}

fn load(path: &Path) -> Result<SequenceDocument, CmdError> {
    let text = fs::read_to_string(path)
        .map_err(|e| usage_err(format!("cannot read {}: {e}", path.display())))?;
    parse_sequence(&text).map_err(|e| usage_err(format!("{}: {e}", path.display())))
}

fn render(doc: &SequenceDocument, format: Format) -> String {
    match format {
        Format::Text => serialize_sequence(doc),
        Format::Structured => serialize_structured(doc),
    }
}

fn dispatch(cli: &Cli) -> Result<u8, CmdError> {
    match &cli.cmd {
        Cmd::Validate { file } => cmd_validate(&load(file)?),
        Cmd::Apply { file } => cmd_apply(&load(file)?),
        Cmd::Eliminate { file } => cmd_eliminate(&load(file)?, cli.format),
        Cmd::Decide(args) => cmd_decide(args, cli.format, cli.max_nodes),
        Cmd::Enumerate { n, bound, out } => cmd_enumerate(*n, *bound, out.as_deref()),
        Cmd::Normalize { file } => cmd_normalize(&load(file)?, cli.format),
    }
}

/// Walk the sequence move by move so that statuses before a
/// non-admissible move are still reported.
fn cmd_validate(doc: &SequenceDocument) -> Result<u8, CmdError> {
    let mut state = doc.seq.init.clone();
    let mut all_valid = true;
    for (idx, &mv) in doc.seq.moves.iter().enumerate() {
        let status = crealize::state::classify(&state, mv);
        println!("move {}: {mv}: {status}", idx + 1);
        if status == MoveStatus::NotAdmissible {
            return Err(false_err(format!("move {} is not admissible", idx + 1)));
        }
        if status != MoveStatus::Valid {
            all_valid = false;
        }
        state = crealize::state::apply(&state, mv)
            .map_err(|e| false_err(format!("move {}: {e}", idx + 1)))?;
    }
    println!("final {state}");
    Ok(if all_valid { 0 } else { EXIT_FALSE })
}

fn cmd_apply(doc: &SequenceDocument) -> Result<u8, CmdError> {
    let trace = crealize::laws::run(&doc.seq).map_err(|e| false_err(e.to_string()))?;
    println!("final {}", trace.final_state());
    Ok(0)
}

fn map_eliminate_err(e: EliminateError) -> CmdError {
    match e {
        EliminateError::PreconditionViolated(msg) => false_err(msg),
        other => internal_err(other.to_string()),
    }
}

fn cmd_eliminate(doc: &SequenceDocument, format: Format) -> Result<u8, CmdError> {
    let report = eliminate_all(&doc.seq).map_err(map_eliminate_err)?;
    let out = SequenceDocument {
        name: doc.name.clone(),
        seq: report.output,
    };
    print!("{}", render(&out, format));
    let cases: Vec<String> = report.cases_taken.iter().map(|c| c.to_string()).collect();
    eprintln!(
        "rewrote {} move(s) into {}, cases: [{}], recursion depth {}",
        doc.seq.moves.len(),
        out.seq.moves.len(),
        cases.join(", "),
        report.recursion_depth
    );
    Ok(0)
}

fn cmd_decide(args: &DecideArgs, format: Format, max_nodes: Option<u64>) -> Result<u8, CmdError> {
    let opts = SearchOptions { max_nodes };
    let result = if args.kind.state {
        decide_state_with(&args.values, &opts)
    } else {
        decide_multiset_with(&args.values, &opts)
    }
    .map_err(|e| internal_err(e.to_string()))?;
    eprintln!("nodes explored: {}", result.nodes_explored);
    if !result.realizable {
        println!("not realizable");
        return Ok(EXIT_FALSE);
    }
    println!("realizable");
    if let Some(perm) = &result.permutation {
        let rendered: Vec<String> = perm.iter().map(|v| v.to_string()).collect();
        println!("permutation: ({})", rendered.join(","));
    }
    if let Some(path) = &args.witness {
        let witness = result.witness.expect("realizable results carry a witness");
        let doc = SequenceDocument::new(witness);
        fs::write(path, render(&doc, format))
            .map_err(|e| usage_err(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(0)
}

fn cmd_enumerate(n: usize, bound: i64, out: Option<&Path>) -> Result<u8, CmdError> {
    if n == 0 {
        return Err(usage_err("n must be at least 1"));
    }
    if bound < 0 {
        return Err(usage_err("bound must be nonnegative"));
    }
    let mut text = String::new();
    for multiset in enumerate(n, bound) {
        let rendered: Vec<String> = multiset.iter().map(|v| v.to_string()).collect();
        text.push_str(&format!("{{{}}}\n", rendered.join(",")));
    }
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| usage_err(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(0)
}

fn cmd_normalize(doc: &SequenceDocument, format: Format) -> Result<u8, CmdError> {
    let normalized = normalize(&doc.seq).map_err(|e| match e {
        crealize::swap::SwapError::PreconditionViolated(msg) => false_err(msg),
        crealize::swap::SwapError::NotAdmissibleAt(k) => {
            false_err(format!("move {k} is not admissible"))
        }
        other => internal_err(other.to_string()),
    })?;
    let out = SequenceDocument {
        name: doc.name.clone(),
        seq: normalized,
    };
    print!("{}", render(&out, format));
    Ok(0)
}
