//! Temporal Ensemble Logic over discrete time (ℕ⁺).
//!
//! Formulas mix Boolean connectives, time shifts `φ_t`, bounded windows
//! `□_t φ` / `◇_t φ` and first-order quantification over time terms. This
//! crate parses and prints them, evaluates them on ultimately periodic
//! words, rewrites them by the deductive equivalences of the logic,
//! translates LTL and TCL into them, and builds the Büchi and PCP
//! encodings used to study the logic's expressive power.

pub mod alphabet;
pub mod cohort;
pub mod encode;
pub mod error;
pub mod eval;
pub mod formula;
pub mod rewrite;
pub mod syntax;
pub mod term;
pub mod translate;
pub mod words;

pub use alphabet::{Alphabet, Mode};
pub use error::Error;
pub use eval::{eval, eval_exact_qf, evaluate, language_member, CompiledFormula, EvalConfig, Evaluation, Truth3};
pub use formula::Formula;
pub use term::{Env, TimeTerm};
pub use words::{FiniteTrace, LassoWord, Letter};
