//! Ground truth for testing: bounded proof search, formula enumeration and
//! seeded random proofs with injected cuts.

pub mod enumerate;
pub mod generate;
pub mod search;
pub mod shape;

pub use enumerate::{alphabet, enumerate_formulae};
pub use generate::{count_cuts, random_derivation, random_derivation_in, write_corpus, CorpusSpec, CutKind, GenError};
pub use search::{prove, SearchConfig, SearchOutcome};
