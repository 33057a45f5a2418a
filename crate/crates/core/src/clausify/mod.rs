//! Clausal forms: plain clausification, relativized formulas and their
//! definitional clausification, and equality axioms.

mod definitional;
mod equality;
mod rqfo;
mod standard;

use thiserror::Error;

pub use definitional::{
    definer_name, definitional_clausify_rqfo, restriction_holds, skolem_name, Definitions,
    PositionInfo, PositionKind,
};
pub use equality::{add_equality_axioms, equivalence_axioms, substitutivity_axioms, EQUALITY};
pub use rqfo::{is_rqfo, negate_rqfo, to_rqfo};
pub use standard::{clause_formula, clausify, ClausalForm, Clausifier};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClausifyError {
    #[error("formula has free variables: {}", .0.join(", "))]
    NotSentence(Vec<String>),
    #[error("not a relativized formula ({reason}): {subformula}")]
    NotRqfo { subformula: String, reason: String },
    #[error("generated name {0} clashes with an input symbol")]
    NameClash(String),
    #[error("clause {clause} violates the restrictions of form {form}")]
    FormRestriction { clause: String, form: u8 },
}
