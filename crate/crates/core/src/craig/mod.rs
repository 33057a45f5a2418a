//! Craig-Lyndon interpolation: ground extraction from two-sided tableaux,
//! lifting to first-order sentences, the Horn variant and verification.

mod extract;
mod interpolate;
mod lift;
mod verify;

use thiserror::Error;

use crate::clausify::ClausifyError;
use crate::logic::SubstError;
use crate::prover::Exhausted;
use crate::tableau::TableauError;

pub use extract::{ipol_ground, ipol_nodes};
pub use interpolate::{
    augmented_pair, ground_cnf, interpolate, interpolate_horn, verification_pair, Grounding,
    InterpolationOptions, InterpolationResult,
};
pub use lift::{lift, lifting_context, LiftingContext, Quantifier};
pub use verify::{verify_craig_lyndon, CraigReport};

pub(crate) use verify::both_entailments;

#[derive(Debug, Error)]
pub enum InterpolationError {
    #[error(transparent)]
    Clausify(#[from] ClausifyError),
    #[error(transparent)]
    NoProof(#[from] Exhausted),
    #[error(transparent)]
    Tableau(#[from] TableauError),
    #[error("lifting failed: {0}")]
    Lifting(#[from] SubstError),
    #[error("first formula is not a Horn sentence")]
    NotHorn,
    #[error("clausification produced a non-Horn clause: {0}")]
    NotHornClause(String),
    #[error("invalid options: {0}")]
    Options(String),
}
