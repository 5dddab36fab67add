//! The `subatomic` command-line tool.
//!
//! Exit codes: 0 success, 1 negative answer (invalid, unprovable, not
//! splittable, not interpretable), 2 usage or format error.

mod commands;
mod input;
#[cfg(test)]
mod tests;

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

pub const EXIT_OK: u8 = 0;
pub const EXIT_NEGATIVE: u8 = 1;
pub const EXIT_ERROR: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "subatomic", version, about = "Subatomic proof systems: checking, splitting, cut elimination and interpretation")]
struct Cli {
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Write derivations in the sequential format instead of the tree format.
    #[arg(long, global = true)]
    seq: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check derivation documents against a system.
    Check {
        /// Built-in system name or `.sas` file.
        #[arg(short, long)]
        system: String,
        /// Also require the premiss to equal the distinguished unit.
        #[arg(long)]
        proof: bool,
        #[arg(required = true)]
        files: Vec<String>,
    },
    /// Report the five splittability conditions.
    Lint {
        #[arg(short, long)]
        system: String,
    },
    /// Shallow splitting of a proof at a `+`-factor of its conclusion.
    Split {
        #[arg(short, long)]
        system: String,
        /// Path of the factor, e.g. `l.r` or `.`.
        #[arg(long)]
        at: String,
        file: String,
        /// Write psi.sad, phi1.sad and phi2.sad into this directory.
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Log the case taken by every recursive call on stderr.
        #[arg(long)]
        trace: bool,
    },
    /// Context reduction of a proof at a subformula of its conclusion.
    Ctxred {
        #[arg(short, long)]
        system: String,
        #[arg(long)]
        at: String,
        file: String,
        /// Write zeta.sad and chi.sad into this directory.
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[arg(long)]
        trace: bool,
    },
    /// Eliminate the up-rule steps of a proof.
    CutElim {
        #[arg(short, long)]
        system: String,
        file: String,
        /// Require exactly one up-rule step.
        #[arg(long)]
        once: bool,
        /// Write the cut-free proof to this file.
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[arg(long)]
        trace: bool,
    },
    /// Interpret a subatomic formula or tame derivation in an ordinary system.
    Interpret {
        /// `classical`, `mll`, `bv` or a system with natural units.
        #[arg(short, long)]
        system: String,
        /// `sks.linear`, `smlls` or `sbv`; defaults to the logic of the map.
        #[arg(short, long)]
        target: Option<String>,
        /// File, `-` for stdin, or literal text.
        input: String,
    },
    /// Represent an ordinary formula or derivation as a subatomic one.
    Represent {
        #[arg(short, long)]
        system: String,
        input: String,
    },
    /// Bounded backward proof search.
    Prove {
        #[arg(short, long)]
        system: String,
        /// Maximum number of rule steps.
        #[arg(short, long, default_value_t = 6)]
        depth: usize,
        #[arg(long, default_value_t = 200_000)]
        budget: usize,
        #[arg(long, default_value_t = 2)]
        slack: usize,
        #[arg(long)]
        no_memo: bool,
        /// Formula text or `.saf` file.
        formula: String,
    },
    /// Generate seeded random proofs.
    Gen {
        #[arg(short, long)]
        system: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of proofs; seeds run from `--seed` upwards.
        #[arg(short = 'n', long, default_value_t = 1)]
        count: u64,
        /// Write a corpus with `manifest.json` into this directory.
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 6)]
        steps: usize,
        #[arg(long, default_value_t = 15)]
        max_nodes: usize,
        #[arg(long, default_value_t = 2)]
        atoms: usize,
        #[arg(long, default_value_t = 0)]
        cuts: usize,
        #[arg(long, value_enum, default_value_t = CutKindArg::Any)]
        cut_kind: CutKindArg,
        #[arg(long, default_value_t = 0)]
        cut_size: usize,
        /// Keep rule steps outside the scope of atoms.
        #[arg(long)]
        tame: bool,
    },
    /// Sampled audit of the preservability conditions of an interpretation map.
    Audit {
        #[arg(short, long)]
        system: String,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CutKindArg {
    Any,
    Atom,
    NonAtom,
}

/// Successful runs end with a yes or no answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Outcome {
    Yes,
    No,
}

/// A usage or format error, reported on stderr with exit code 2.
#[derive(Debug)]
struct Fail(String);

impl From<io::Error> for Fail {
    fn from(e: io::Error) -> Self {
        Fail(e.to_string())
    }
}

type Res = Result<Outcome, Fail>;

struct Ctx<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    json: bool,
    seq: bool,
}

/// Runs the tool on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut ctx = Ctx { out, err, json: cli.json, seq: cli.seq };
    let res = commands::dispatch(&mut ctx, cli.command);
    let _ = ctx.out.flush();
    match res {
        Ok(Outcome::Yes) => EXIT_OK,
        Ok(Outcome::No) => EXIT_NEGATIVE,
        Err(Fail(msg)) => {
            let _ = writeln!(ctx.err, "error: {msg}");
            EXIT_ERROR
        }
    }
}
