//! Text formats: the formula grammar and the JSON tableau format.
//!
//! Formulas use a Prolog-like syntax. Variables start with an uppercase
//! letter or `_`, predicate and function names with a lowercase letter.
//! Connectives by decreasing binding strength: `~`, `&`, `|`, `->`, `<->`.
//! `all X Y. F` and `ex X. F` extend as far right as possible.

mod parser;
mod print;
mod tableau_io;

pub use parser::{parse_formula, parse_literal, parse_term, ParseError, SourceSpan};
pub use tableau_io::{parse_tableau, print_tableau, render_tableau, TableauIoError};

use crate::logic::Formula;

/// Renders a formula in the input grammar.
pub fn print_formula(f: &Formula) -> String {
    f.to_string()
}
