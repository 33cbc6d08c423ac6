//! Symbolic dynamics over `Z^d` and free groups: admissible patterns,
//! Markov-property checks, asymptotic and homoclinic searches, and entropy
//! estimates.

pub mod admissible;
pub mod automaton;
pub mod budget;
pub mod certificate;
mod csp;
pub mod entropy;
pub mod error;
pub mod format;
pub mod gf2;
pub mod group;
pub mod pattern;
pub mod spec;
pub mod tmp;
pub mod zoo;

pub use budget::SearchConfig;
pub use error::{Error, Result};
pub use group::{FiniteSubset, GroupElement, GroupSpec};
pub use pattern::{Alphabet, Pattern, Symbol};
pub use spec::{AdmissibilityLevel, Predicate, Rule, SubshiftSpec};
