//! Natural interpretation maps from subatomic formulae and derivations to
//! ordinary deep-inference systems, with tameness checks and a sampled
//! preservability audit.

pub mod audit;
pub mod formula;
pub mod map;
pub mod ordinary;
pub mod tame;
pub mod translate;

pub use audit::{audit_preservable, random_ordinary, AuditReport, Counterexample};
pub use formula::OrdinaryFormula;
pub use map::InterpretationMap;
pub use ordinary::{ordinary_system, OrdinaryDerivation, OrdinaryRule, OrdinaryStep, OrdinarySystem, ORDINARY_SYSTEMS};
pub use tame::{is_tame, tame_repair};
pub use translate::{interpret_derivation, represent_derivation};

use subatomic_core::{render_path, Path};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InterpError {
    #[error("`{formula}` is not interpretable at @{}", render_path(.path))]
    NotInterpretable { formula: String, path: Path },
    #[error("step {step}: {msg}")]
    Translation { step: usize, msg: String },
    #[error("unknown ordinary rule `{0}`")]
    UnknownRule(String),
    #[error("invalid ordinary derivation at step {step}: {msg}")]
    Check { step: usize, msg: String },
    #[error("{0}")]
    Map(String),
    #[error(transparent)]
    Core(#[from] subatomic_core::Error),
}

pub type Result<T> = std::result::Result<T, InterpError>;
