//! Concrete syntax.
//!
//! Formulas: `phi @ t` (shift), `!phi`, `[t] phi`, `<t> phi`, `[] phi`,
//! `<> phi`, `&`, `|`, `->`, `exists x . phi`, `forall x . phi`. Terms are
//! sums of positive integers and variables, with `n*t` for an n-fold sum.
//! Binding, tightest first: `@`, the prefix operators, `&`, `|`, `->` (right
//! associative); quantifier bodies extend as far right as possible.

mod json;
mod lexer;
mod ltl;
mod parser;
mod printer;
mod tcl;

pub use json::formula_to_json;
pub use ltl::parse_ltl;
pub use parser::{parse_formula, parse_formula_with, parse_term, ParseOptions};
pub use printer::{print_formula, print_term};
pub use tcl::parse_tcl;
