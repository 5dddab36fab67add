//! Reading systems, documents and paths from the command line.

use std::io::Read;
use std::path::Path;

use subatomic_core::{builtin, load_system, parse_path, Derivation, Error, SeqDerivation, SystemDef, BUILTIN_NAMES};
use subatomic_interp::{InterpError, InterpretationMap};

use crate::Fail;

/// Text of a document together with the name used in diagnostics.
pub struct Source {
    pub label: String,
    pub text: String,
}

/// Reads `arg` as a file, or stdin for `-`.
pub fn read_file(arg: &str) -> Result<Source, Fail> {
    let text = if arg == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        s
    } else {
        std::fs::read_to_string(arg).map_err(|e| Fail(format!("{arg}: {e}")))?
    };
    Ok(Source { label: if arg == "-" { "<stdin>".into() } else { arg.into() }, text })
}

/// Reads `arg` as a file if one exists, otherwise takes it as literal text.
pub fn read_file_or_text(arg: &str) -> Result<Source, Fail> {
    if arg == "-" || Path::new(arg).is_file() {
        read_file(arg)
    } else {
        Ok(Source { label: "<argument>".into(), text: arg.into() })
    }
}

/// `file:line:col: message` for parse errors, `file: message` otherwise.
pub fn diag(label: &str, e: &Error) -> String {
    match e {
        Error::Parse { line, col, msg } => format!("{label}:{line}:{col}: {msg}"),
        Error::Check { node, msg } => format!("{label}: node {node}: {msg}"),
        other => format!("{label}: {other}"),
    }
}

pub fn interp_diag(label: &str, e: &InterpError) -> String {
    match e {
        InterpError::Core(c) => diag(label, c),
        other => format!("{label}: {other}"),
    }
}

/// A built-in system by name or a `.sas` document.
pub fn system(arg: &str) -> Result<SystemDef, Fail> {
    if Path::new(arg).is_file() {
        let src = read_file(arg)?;
        return load_system(&src.text).map_err(|e| Fail(diag(&src.label, &e)));
    }
    if BUILTIN_NAMES.contains(&arg) {
        return builtin(arg).map_err(|e| Fail(e.to_string()));
    }
    Err(Fail(format!("unknown system `{arg}`: not a file and not one of {}", BUILTIN_NAMES.join(", "))))
}

/// An interpretation map by logic name, built-in system name or `.sas` document.
pub fn map(arg: &str) -> Result<InterpretationMap, Fail> {
    if matches!(arg, "classical" | "mll" | "bv") {
        return InterpretationMap::builtin(arg).map_err(|e| Fail(e.to_string()));
    }
    InterpretationMap::for_system(system(arg)?).map_err(|e| Fail(e.to_string()))
}

pub fn path(arg: &str) -> Result<Vec<subatomic_core::Dir>, Fail> {
    parse_path(arg).ok_or_else(|| Fail(format!("`{arg}` is not a path; use e.g. `l.r` or `.`")))
}

fn first_word(text: &str) -> Option<&str> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(|l| l.split(|c: char| c.is_whitespace() || c == '(').filter(|w| !w.is_empty()))
        .next()
}

/// Whether the document text is a derivation rather than a formula.
pub fn is_derivation(text: &str) -> bool {
    matches!(first_word(text), Some("seq" | "start" | "step" | "form" | "comp"))
}

fn is_sequential(text: &str) -> bool {
    matches!(first_word(text), Some("seq" | "start"))
}

/// Checks a parsed document. Errors in sequential documents name the line of the step.
pub fn check_document(src: &Source, sys: &SystemDef, d: &Derivation) -> Result<(), String> {
    if !is_sequential(&src.text) {
        return d.check(sys).map_err(|e| diag(&src.label, &e));
    }
    let (_, s) = SeqDerivation::parse(&src.text, &sys.sig).map_err(|e| diag(&src.label, &e))?;
    s.check(sys).map_err(|e| match &e {
        Error::Check { node, msg } => {
            let k: Option<usize> = node.strip_prefix("step ").and_then(|r| r.split(' ').next()).and_then(|n| n.parse().ok());
            let line = k.and_then(|k| {
                src.text.lines().enumerate().filter(|(_, l)| l.split_whitespace().next() == Some("step")).nth(k - 1)
            });
            match line {
                Some((i, _)) => format!("{}:{}: {node}: {msg}", src.label, i + 1),
                None => diag(&src.label, &e),
            }
        }
        _ => diag(&src.label, &e),
    })
}
