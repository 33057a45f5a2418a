use crate::clausify::{Clausifier, ClausifyError};
use crate::logic::Formula;

use super::{prove_connection, ClauseSet, Exhausted, ProofBudget, StartPolicy};

/// Outcome of a bounded entailment check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Entailment {
    /// A closed tableau for `F ∧ ¬G` was found.
    Yes,
    /// No proof within budget. Not a counter-model claim, although
    /// `Exhausted::reason == Saturated` does mean the search space ran dry.
    Unknown(Exhausted),
}

impl Entailment {
    pub fn is_yes(&self) -> bool {
        matches!(self, Entailment::Yes)
    }
}

/// Disjunctions larger than this are renamed during clausification.
/// Distribution beyond this many clauses introduces definitions instead.
pub const RENAME_THRESHOLD: usize = 64;

/// Checks `premise ⊨ conclusion` by refuting `premise ∧ ¬conclusion`.
pub fn entails(premise: &Formula, conclusion: &Formula, budget: &ProofBudget) -> Entailment {
    match entails_with(premise, conclusion, budget) {
        Ok(e) => e,
        Err(_) => Entailment::Unknown(Exhausted {
            reason: super::ExhaustReason::Saturated,
            inferences: 0,
        }),
    }
}

/// Like [`entails`] but reports clausification errors (free variables).
pub fn entails_with(
    premise: &Formula,
    conclusion: &Formula,
    budget: &ProofBudget,
) -> Result<Entailment, ClausifyError> {
    let problem = Formula::and(vec![premise.clone(), Formula::not(conclusion.clone())]);
    let form = Clausifier::for_formulas([premise, conclusion])
        .with_renaming(RENAME_THRESHOLD)
        .clausify(&problem)?;
    if form.has_empty_clause() {
        return Ok(Entailment::Yes);
    }
    Ok(
        match prove_connection(&ClauseSet::from_form(&form), StartPolicy::Negative, budget) {
            Ok(_) => Entailment::Yes,
            Err(e) => Entailment::Unknown(e),
        },
    )
}
