//! Terms, formulas, substitutions and vocabulary.

mod formula;
mod fresh;
mod subst;
mod term;
mod vocab;

pub use formula::Formula;
pub use fresh::FreshNames;
pub use subst::{
    is_variant, match_atom, match_clause, match_literal, match_term, SubstError, Substitution,
};
pub use term::{Atom, Clause, Literal, Polarity, Term};
pub use vocab::{
    clause_vocabulary, garg, literal_garg, literal_occurrences, visit_signed, vocabulary,
    Signature, Vocabulary,
};
