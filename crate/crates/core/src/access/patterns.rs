use std::collections::BTreeSet;
use std::fmt;

use crate::logic::{Atom, Formula};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PatternSign {
    /// Existential access: the relation is queried for tuples.
    Positive,
    /// Universal access: the relation is checked for all tuples.
    Negative,
}

impl PatternSign {
    pub fn symbol(self) -> char {
        match self {
            PatternSign::Positive => '+',
            PatternSign::Negative => '-',
        }
    }
}

/// How a relation occurrence is accessed: its sign, the relation, and the
/// argument positions (1-based) that must be supplied as inputs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BindingPattern {
    pub sign: PatternSign,
    pub predicate: String,
    pub input_positions: BTreeSet<usize>,
}

impl BindingPattern {
    pub fn new(
        sign: PatternSign,
        predicate: impl Into<String>,
        inputs: impl IntoIterator<Item = usize>,
    ) -> Self {
        BindingPattern {
            sign,
            predicate: predicate.into(),
            input_positions: inputs.into_iter().collect(),
        }
    }

    fn of_guard(sign: PatternSign, guard: &Atom, vars: &[String]) -> Self {
        let inputs = guard
            .args
            .iter()
            .enumerate()
            .filter(|(_, t)| !t.as_var().is_some_and(|v| vars.iter().any(|x| x == v)))
            .map(|(i, _)| i + 1);
        BindingPattern::new(sign, guard.pred.clone(), inputs)
    }

    /// `self` is covered by `by` when sign and relation agree and `by` needs
    /// no more inputs than `self` supplies.
    pub fn covered_by(&self, by: &BindingPattern) -> bool {
        self.sign == by.sign
            && self.predicate == by.predicate
            && by.input_positions.is_subset(&self.input_positions)
    }
}

impl fmt::Display for BindingPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inputs: Vec<String> = self.input_positions.iter().map(|i| i.to_string()).collect();
        write!(
            f,
            "<{},{},{{{}}}>",
            self.sign.symbol(),
            self.predicate,
            inputs.join(",")
        )
    }
}

pub fn covered(pattern: &BindingPattern, by: &BindingPattern) -> bool {
    pattern.covered_by(by)
}

/// Binding patterns of a relativized formula. Constructs outside the
/// relativized fragment contribute only through relativized subformulas.
pub fn binding_patterns(f: &Formula) -> BTreeSet<BindingPattern> {
    let mut out = BTreeSet::new();
    collect(f, &mut out);
    out
}

fn collect(f: &Formula, out: &mut BTreeSet<BindingPattern>) {
    match f {
        Formula::ForallRel { vars, guard, body } => {
            out.insert(BindingPattern::of_guard(PatternSign::Negative, guard, vars));
            collect(body, out);
        }
        Formula::ExistsRel { vars, guard, body } => {
            out.insert(BindingPattern::of_guard(PatternSign::Positive, guard, vars));
            collect(body, out);
        }
        Formula::And(gs) | Formula::Or(gs) => gs.iter().for_each(|g| collect(g, out)),
        Formula::Not(g) | Formula::Forall(_, g) | Formula::Exists(_, g) => collect(g, out),
        Formula::True | Formula::False | Formula::Atom(_) => {}
    }
}

/// Members of `patterns` with the given sign that no member of `by` covers.
pub fn uncovered(
    patterns: &BTreeSet<BindingPattern>,
    by: &BTreeSet<BindingPattern>,
    sign: PatternSign,
) -> Vec<BindingPattern> {
    patterns
        .iter()
        .filter(|p| p.sign == sign && !by.iter().any(|b| p.covered_by(b)))
        .cloned()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clausify::to_rqfo;
    use crate::syntax::parse_formula;

    fn rq(src: &str) -> Formula {
        to_rqfo(&parse_formula(src).unwrap()).unwrap()
    }

    #[test]
    fn guarded_example() {
        let got = binding_patterns(&rq("all X. (~r(X) | ex Y Z. (s(X,Y,Z) & true))"));
        let want = BTreeSet::from([
            BindingPattern::new(PatternSign::Negative, "r", []),
            BindingPattern::new(PatternSign::Positive, "s", [1]),
        ]);
        assert_eq!(got, want);
    }

    #[test]
    fn constants_and_truth_values() {
        assert!(binding_patterns(&Formula::True).is_empty());
        let got = binding_patterns(&rq("r(a) & ex X. p(X, b)"));
        assert!(got.contains(&BindingPattern::new(PatternSign::Positive, "r", [1])));
        assert!(got.contains(&BindingPattern::new(PatternSign::Positive, "p", [2])));
    }

    #[test]
    fn coverage_direction() {
        let s1 = BindingPattern::new(PatternSign::Positive, "s", [1]);
        let s0 = BindingPattern::new(PatternSign::Positive, "s", []);
        assert!(covered(&s1, &s0));
        assert!(!covered(&s0, &s1));
        let neg = BindingPattern::new(PatternSign::Negative, "s", []);
        assert!(!covered(&s1, &neg));
        assert_eq!(s1.to_string(), "<+,s,{1}>");
    }
}
