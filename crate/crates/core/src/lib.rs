//! Subatomic formulae, equational theories, proof systems and open-deduction
//! derivations.

pub mod deriv;
pub mod error;
pub mod lex;
pub mod system;
pub mod term;
pub mod theory;

pub use deriv::{apply_at, compose_seq, plug_derivation, validate_step, Derivation, SeqDerivation, SeqStep};
pub use error::{Error, Result};
pub use system::{
    builtin, load_system, match_rule_instance, resolve, ConnRef, Instance, LintReport, RuleKind, RuleRef, RuleScheme, SystemDef,
    Verdict, BUILTIN_NAMES,
};
pub use term::{parse_path, render_path, ConnId, ConstId, Context, Dir, Formula, Path, Polarity, Signature};
pub use theory::{Axiom, EqStep, Subset, Theory};
