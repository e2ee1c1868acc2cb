//! Exact computations on substitutive subshifts: quasi-fixed points, their digit streams and
//! kernel automata, desubstitution, block presentations and sliding block codes.

pub mod analysis;
pub mod blocks;
pub mod catalog;
pub mod corpus;
pub mod desub;
pub mod error;
pub mod format;
pub mod kadic;
pub mod kernel;
pub mod language;
pub mod morphism;
pub mod onesided;
pub mod quasifix;
pub mod window;

pub use blocks::{BlockSubstitution, SlidingBlockCode};
pub use desub::Detection;
pub use error::{Error, Result};
pub use kadic::{kappa, DigitExpansion, KAdicRational};
pub use kernel::KernelAutomaton;
pub use morphism::{Alphabet, Coding, Letter, LetterMap, Substitution, Word};
pub use onesided::OneSidedQfp;
pub use quasifix::{Qfp, QfpSeed, Relation, SeedForm};
pub use window::Window;
