use std::collections::BTreeSet;
use std::fmt;

use crate::clausify::{is_rqfo, to_rqfo};
use crate::craig::both_entailments;
use crate::logic::{vocabulary, Formula};
use crate::prover::{Entailment, ProofBudget};

use super::patterns::{binding_patterns, uncovered, BindingPattern, PatternSign};

/// Result of checking an access interpolant candidate `H` for `F ⊨ G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AccessReport {
    pub premise_entails: Entailment,
    pub entails_conclusion: Entailment,
    /// Predicates of `H` missing from `F` or `G`.
    pub foreign_predicates: Vec<String>,
    /// Existential patterns of `H` not covered by one of `G`.
    pub uncovered_existential: Vec<BindingPattern>,
    /// Universal patterns of `H` not covered by one of `F`.
    pub uncovered_universal: Vec<BindingPattern>,
    /// Constants of `H` missing from `F` or `G`.
    pub foreign_constants: Vec<String>,
    /// `H` is a relativized sentence.
    pub relativized: bool,
}

impl AccessReport {
    pub fn semantic_ok(&self) -> bool {
        self.premise_entails.is_yes() && self.entails_conclusion.is_yes()
    }

    pub fn patterns_ok(&self) -> bool {
        self.uncovered_existential.is_empty() && self.uncovered_universal.is_empty()
    }

    pub fn passed(&self) -> bool {
        self.semantic_ok()
            && self.foreign_predicates.is_empty()
            && self.patterns_ok()
            && self.foreign_constants.is_empty()
            && self.relativized
    }
}

fn entailment_line(e: &Entailment) -> String {
    match e {
        Entailment::Yes => "PASS".into(),
        Entailment::Unknown(x) => format!("UNKNOWN ({:?})", x.reason),
    }
}

fn list<T: fmt::Display>(items: &[T]) -> String {
    if items.is_empty() {
        "PASS".into()
    } else {
        let parts: Vec<String> = items.iter().map(T::to_string).collect();
        format!("FAIL ({})", parts.join(", "))
    }
}

impl fmt::Display for AccessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "F |= H: {}", entailment_line(&self.premise_entails))?;
        writeln!(f, "H |= G: {}", entailment_line(&self.entails_conclusion))?;
        writeln!(f, "predicates: {}", list(&self.foreign_predicates))?;
        writeln!(
            f,
            "existential patterns: {}",
            list(&self.uncovered_existential)
        )?;
        writeln!(f, "universal patterns: {}", list(&self.uncovered_universal))?;
        writeln!(f, "constants: {}", list(&self.foreign_constants))?;
        writeln!(
            f,
            "relativized: {}",
            if self.relativized { "PASS" } else { "FAIL" }
        )?;
        write!(
            f,
            "overall: {}",
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}

fn relativized(f: &Formula) -> Option<Formula> {
    if is_rqfo(f) {
        Some(f.clone())
    } else {
        to_rqfo(f).ok()
    }
}

/// Checks the access interpolant conditions: `F ⊨ H ⊨ G` (budget-bounded);
/// predicates of `H` occur in both inputs; existential binding patterns of
/// `H` are covered by those of `G` and universal ones by those of `F`;
/// constants of `H` occur in both inputs. Inputs that are not relativized
/// are read through their relativized form.
pub fn verify_access(f: &Formula, g: &Formula, h: &Formula, budget: &ProofBudget) -> AccessReport {
    let (premise_entails, entails_conclusion) = both_entailments(f, g, h, budget);
    let (vf, vg, vh) = (vocabulary(f), vocabulary(g), vocabulary(h));
    let shared_preds: BTreeSet<String> = vf
        .pred_names()
        .intersection(&vg.pred_names())
        .cloned()
        .collect();
    let foreign_predicates = vh
        .pred_names()
        .into_iter()
        .filter(|p| !shared_preds.contains(p))
        .collect();
    let foreign_constants = vh
        .consts
        .iter()
        .filter(|c| !vf.consts.contains(*c) || !vg.consts.contains(*c))
        .cloned()
        .collect();
    let h_rq = relativized(h);
    let patterns = |x: &Formula| {
        relativized(x)
            .map(|r| binding_patterns(&r))
            .unwrap_or_default()
    };
    let (pf, pg) = (patterns(f), patterns(g));
    let ph = h_rq.as_ref().map(binding_patterns).unwrap_or_default();
    AccessReport {
        premise_entails,
        entails_conclusion,
        foreign_predicates,
        uncovered_existential: uncovered(&ph, &pg, PatternSign::Positive),
        uncovered_universal: uncovered(&ph, &pf, PatternSign::Negative),
        foreign_constants,
        relativized: h_rq.is_some() && h.is_sentence(),
    }
}
