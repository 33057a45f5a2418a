use std::collections::BTreeSet;
use std::fmt;

use crate::logic::{vocabulary, Formula, Polarity};
use crate::prover::{entails, Entailment, ProofBudget};

/// Result of checking a Craig-Lyndon interpolant candidate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CraigReport {
    /// `F ⊨ H`.
    pub premise_entails: Entailment,
    /// `H ⊨ G`.
    pub entails_conclusion: Entailment,
    /// Predicates of `H` (with polarity) missing from `F` or `G`.
    pub foreign_predicates: Vec<(String, Polarity)>,
    /// Functions and constants of `H` missing from `F` or `G`.
    pub foreign_functions: Vec<String>,
    pub is_sentence: bool,
}

impl CraigReport {
    pub fn passed(&self) -> bool {
        self.premise_entails.is_yes()
            && self.entails_conclusion.is_yes()
            && self.foreign_predicates.is_empty()
            && self.foreign_functions.is_empty()
            && self.is_sentence
    }

    pub fn syntax_ok(&self) -> bool {
        self.foreign_predicates.is_empty() && self.foreign_functions.is_empty() && self.is_sentence
    }
}

fn verdict(e: &Entailment) -> String {
    match e {
        Entailment::Yes => "PASS".into(),
        Entailment::Unknown(x) => format!("UNKNOWN ({:?})", x.reason),
    }
}

impl fmt::Display for CraigReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "F |= H: {}", verdict(&self.premise_entails))?;
        writeln!(f, "H |= G: {}", verdict(&self.entails_conclusion))?;
        if self.foreign_predicates.is_empty() {
            writeln!(f, "predicates: PASS")?;
        } else {
            let list: Vec<String> = self
                .foreign_predicates
                .iter()
                .map(|(p, pol)| format!("{}{p}", pol.symbol()))
                .collect();
            writeln!(f, "predicates: FAIL ({})", list.join(", "))?;
        }
        if self.foreign_functions.is_empty() {
            writeln!(f, "functions: PASS")?;
        } else {
            writeln!(f, "functions: FAIL ({})", self.foreign_functions.join(", "))?;
        }
        writeln!(
            f,
            "sentence: {}",
            if self.is_sentence { "PASS" } else { "FAIL" }
        )?;
        write!(
            f,
            "overall: {}",
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}

/// Runs both entailment checks, in parallel.
pub(crate) fn both_entailments(
    f: &Formula,
    g: &Formula,
    h: &Formula,
    budget: &ProofBudget,
) -> (Entailment, Entailment) {
    std::thread::scope(|s| {
        let left = s.spawn(|| entails(f, h, budget));
        let right = entails(h, g, budget);
        (
            left.join().unwrap_or_else(|e| std::panic::resume_unwind(e)),
            right,
        )
    })
}

/// Checks `F ⊨ H ⊨ G` (budget-bounded) and the symbol conditions: every
/// predicate of `H` occurs with the same polarity in both `F` and `G`, and
/// every function or constant of `H` occurs in both.
pub fn verify_craig_lyndon(
    f: &Formula,
    g: &Formula,
    h: &Formula,
    budget: &ProofBudget,
) -> CraigReport {
    let (premise_entails, entails_conclusion) = both_entailments(f, g, h, budget);
    let (vf, vg, vh) = (vocabulary(f), vocabulary(g), vocabulary(h));
    let foreign_predicates = vh
        .preds
        .iter()
        .filter(|p| !vf.preds.contains(*p) || !vg.preds.contains(*p))
        .cloned()
        .collect();
    let shared: BTreeSet<&String> = vf.funs.intersection(&vg.funs).collect();
    let foreign_functions = vh
        .funs
        .iter()
        .filter(|s| !shared.contains(s))
        .cloned()
        .collect();
    CraigReport {
        premise_entails,
        entails_conclusion,
        foreign_predicates,
        foreign_functions,
        is_sentence: h.is_sentence(),
    }
}
