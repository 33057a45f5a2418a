use crate::logic::{Formula, FreshNames};
use crate::prover::{prove, ClauseSet, ProofBudget, ProverKind};
use crate::tableau::{ground_tableau, GroundingStrategy, Tableau};
use crate::transform::{to_aci, TransformTrace};

use super::context::AciContext;
use super::extract::aipol_with_notes;
use super::verify::{verify_access, AccessReport};
use super::AccessError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AccessOptions {
    /// `Hyper` builds a positive hyper tableau directly; `Connection`
    /// proves goal-directed and restructures the proof.
    pub prover: ProverKind,
    pub budget: ProofBudget,
    pub verify: bool,
}

impl Default for AccessOptions {
    fn default() -> Self {
        AccessOptions {
            prover: ProverKind::Hyper,
            budget: ProofBudget::default(),
            verify: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct AccessResult {
    pub interpolant: Formula,
    /// The grounded, coloured proof as found by the prover.
    pub proof: Tableau,
    /// The ACI tableau the interpolant was extracted from.
    pub tableau: Tableau,
    pub trace: TransformTrace,
    pub context: AciContext,
    pub verification: Option<AccessReport>,
    pub notes: Vec<String>,
}

impl AccessResult {
    pub fn verified(&self) -> bool {
        self.verification.as_ref().is_some_and(AccessReport::passed) && self.notes.is_empty()
    }
}

/// Access interpolation for relativized sentences with `F ⊨ G`.
///
/// Clausifies the definitional forms of `F` and `¬G`, proves their
/// conjunction unsatisfiable, colours the proof by matching against the
/// definitional clauses, grounds leftover variables, restructures the
/// tableau into ACI shape and extracts the interpolant.
pub fn access_interpolate(
    f: &Formula,
    g: &Formula,
    opts: &AccessOptions,
) -> Result<AccessResult, AccessError> {
    opts.budget.validate().map_err(AccessError::Options)?;
    let ctx = AciContext::new(f, g)?;
    let set = ClauseSet::two_sided(&ctx.red, &ctx.blue);
    let raw = prove(opts.prover, &set, &opts.budget)?;
    let sided = ctx.annotate(&raw)?;
    let mut names = FreshNames::avoiding(ctx.red.funs().into_iter().chain(ctx.blue.funs()));
    let k = names.fresh_like("k");
    let proof = ground_tableau(&sided, &GroundingStrategy::Uniform(k));
    let mut trace = TransformTrace::default();
    let tableau = to_aci(&proof, &ctx, &mut trace)?;
    let (interpolant, notes) = aipol_with_notes(&tableau, &ctx)?;
    let verification = opts
        .verify
        .then(|| verify_access(f, g, &interpolant, &opts.budget));
    Ok(AccessResult {
        interpolant,
        proof,
        tableau,
        trace,
        context: ctx,
        verification,
        notes,
    })
}
