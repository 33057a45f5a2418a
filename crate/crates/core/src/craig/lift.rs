use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::logic::{Formula, SubstError, Substitution, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Forall,
    Exists,
}

impl fmt::Display for Quantifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Quantifier::Forall => "all",
            Quantifier::Exists => "ex",
        })
    }
}

/// Everything needed to turn a ground interpolant into a sentence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftingContext {
    /// Functions that occur only on the red side; their terms become
    /// existentially quantified variables.
    pub f_set: BTreeSet<String>,
    /// Functions that occur only on the blue side, plus the grounding
    /// constant; their terms become universally quantified variables.
    pub g_set: BTreeSet<String>,
    /// Maps each fresh variable to the maximal side-exclusive term it replaces.
    pub stt: Substitution,
    /// Quantifier prefix, ordered so that replaced subterms come first.
    pub prefix: Vec<(String, Quantifier)>,
}

impl LiftingContext {
    /// Whether the prefix respects the strict-subterm order of replaced terms.
    pub fn prefix_respects_subterms(&self) -> bool {
        let terms: Vec<&Term> = self
            .prefix
            .iter()
            .map(|(v, _)| self.stt.get(v).expect("prefix variable in stt"))
            .collect();
        for (i, a) in terms.iter().enumerate() {
            for b in &terms[..i] {
                if a.is_strict_subterm_of(b) {
                    return false;
                }
            }
        }
        true
    }

    pub fn quantifier_of(&self, var: &str) -> Option<Quantifier> {
        self.prefix.iter().find(|(v, _)| v == var).map(|(_, q)| *q)
    }
}

fn marked(t: &Term, f_set: &BTreeSet<String>, g_set: &BTreeSet<String>) -> Option<Quantifier> {
    let head = t.functor()?;
    if g_set.contains(head) {
        Some(Quantifier::Forall)
    } else if f_set.contains(head) {
        Some(Quantifier::Exists)
    } else {
        None
    }
}

fn collect_maximal(
    t: &Term,
    f_set: &BTreeSet<String>,
    g_set: &BTreeSet<String>,
    out: &mut BTreeMap<Term, Quantifier>,
) {
    if let Some(q) = marked(t, f_set, g_set) {
        out.insert(t.clone(), q);
    } else {
        for a in t.args() {
            collect_maximal(a, f_set, g_set, out);
        }
    }
}

/// Computes the replacement substitution and prefix for a ground formula.
///
/// Variables are named `X1, X2, ...` (universal) and `Y1, Y2, ...`
/// (existential) in prefix order. Terms are ordered by size and then by
/// printed form, which places every replaced term after its replaced
/// subterms.
pub fn lifting_context(
    h_b: &Formula,
    f_set: &BTreeSet<String>,
    g_set: &BTreeSet<String>,
) -> LiftingContext {
    let mut found = BTreeMap::new();
    h_b.visit_atoms(&mut |a| {
        for t in &a.args {
            collect_maximal(t, f_set, g_set, &mut found);
        }
    });
    let mut terms: Vec<(Term, Quantifier)> = found.into_iter().collect();
    terms.sort_by_cached_key(|(t, _)| (t.size(), t.to_string()));
    let mut stt = Substitution::new();
    let mut prefix = Vec::new();
    let (mut nx, mut ny) = (0, 0);
    for (t, q) in terms {
        let v = match q {
            Quantifier::Forall => {
                nx += 1;
                format!("X{nx}")
            }
            Quantifier::Exists => {
                ny += 1;
                format!("Y{ny}")
            }
        };
        stt.bind(v.clone(), t);
        prefix.push((v, q));
    }
    LiftingContext {
        f_set: f_set.clone(),
        g_set: g_set.clone(),
        stt,
        prefix,
    }
}

/// Replaces maximal side-exclusive terms of the ground formula `h_b` by
/// variables and quantifies them.
pub fn lift(
    h_b: &Formula,
    f_set: &BTreeSet<String>,
    g_set: &BTreeSet<String>,
) -> Result<(Formula, LiftingContext), SubstError> {
    if h_b.all_vars().iter().next().is_some() || !h_b.is_quantifier_free() {
        return Err(SubstError::NotGround);
    }
    let ctx = lifting_context(h_b, f_set, g_set);
    let h_q = ctx.stt.inverse_formula(h_b)?;
    let lifted = ctx.prefix.iter().rev().fold(h_q, |body, (v, q)| match q {
        Quantifier::Forall => Formula::Forall(v.clone(), Box::new(body)),
        Quantifier::Exists => Formula::Exists(v.clone(), Box::new(body)),
    });
    Ok((lifted, ctx))
}
