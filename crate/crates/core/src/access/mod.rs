//! Access interpolation for relativized formulas: binding patterns, the
//! validity check for ACI tableaux, extraction, and verification.

mod check;
mod context;
mod extract;
mod interpolate;
mod patterns;
mod verify;

use thiserror::Error;

use crate::clausify::ClausifyError;
use crate::logic::SubstError;
use crate::prover::Exhausted;
use crate::tableau::TableauError;
use crate::transform::TransformError;

pub use check::check_aci;
pub use context::AciContext;
pub use extract::{aipol, aipol_nodes, aipol_with_notes};
pub use interpolate::{access_interpolate, AccessOptions, AccessResult};
pub use patterns::{binding_patterns, covered, uncovered, BindingPattern, PatternSign};
pub use verify::{verify_access, AccessReport};

#[derive(Debug, Error)]
pub enum AccessError {
    #[error(transparent)]
    Clausify(#[from] ClausifyError),
    #[error(transparent)]
    NoProof(#[from] Exhausted),
    #[error(transparent)]
    Tableau(#[from] TableauError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error("not an ACI tableau:\n{0}")]
    NotAci(String),
    #[error("top-level inverse substitution failed: {0}")]
    Substitution(#[from] SubstError),
    #[error("invalid options: {0}")]
    Options(String),
}
