//! Graded noncommutative polynomial algebras presented by length-two
//! rewrite rules.

mod alphabet;
mod confluence;
mod derivation;
mod expr;
mod rewrite;

pub use alphabet::{Alphabet, GenId, Generator, Parity};
pub use confluence::{check_local_confluence, critical_pairs, random_word, ConfluenceReport, Violation};
pub use derivation::{inverse_image, Derivation};
pub use expr::{NCExpr, Word};
pub use rewrite::{
    default_budget, RewriteSystem, RewriteSystemBuilder, Rule, TraceStep, DEFAULT_STEP_BUDGET,
    STEP_BUDGET_ENV,
};
