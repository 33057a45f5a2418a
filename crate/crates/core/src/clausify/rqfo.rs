use std::collections::BTreeSet;

use crate::logic::{Atom, Formula};

use super::ClausifyError;

fn not_rqfo(f: &Formula, reason: &str) -> ClausifyError {
    ClausifyError::NotRqfo {
        subformula: f.to_string(),
        reason: reason.to_string(),
    }
}

/// Recognizes a relational formula whose quantifiers are all guarded and
/// rebuilds it with relativized quantifier nodes.
///
/// The input is first put in negation normal form. `∃vs (R ∧ F)` becomes
/// `ExistsRel` and `∀vs (¬R ∨ F)` becomes `ForallRel`; a guard may bind only
/// part of a quantifier run, the rest moving inward. Unquantified literals are
/// read as relativized quantifiers over no variables.
pub fn to_rqfo(f: &Formula) -> Result<Formula, ClausifyError> {
    let nnf = f.expand_relativized().nnf();
    let mut non_relational = None;
    nnf.visit_atoms(&mut |a| {
        if non_relational.is_none() && !a.is_relational() {
            non_relational = Some(a.clone());
        }
    });
    if let Some(a) = non_relational {
        return Err(not_rqfo(&Formula::Atom(a), "atom has a compound argument"));
    }
    recognize(&nnf)
}

fn recognize(f: &Formula) -> Result<Formula, ClausifyError> {
    match f {
        Formula::True | Formula::False => Ok(f.clone()),
        Formula::Atom(_) | Formula::And(_) => guarded(f, &[], true),
        Formula::Not(_) | Formula::Or(_) => guarded(f, &[], false),
        Formula::Exists(..) | Formula::Forall(..) => {
            let existential = matches!(f, Formula::Exists(..));
            let mut vars: Vec<String> = Vec::new();
            let mut body = f;
            while let (Formula::Exists(v, g), true) | (Formula::Forall(v, g), false) =
                (body, existential)
            {
                if !vars.contains(v) {
                    vars.push(v.clone());
                }
                body = g;
            }
            let free = body.free_vars();
            vars.retain(|v| free.contains(v));
            if vars.is_empty() {
                return recognize(body);
            }
            guarded(body, &vars, existential).map_err(|e| match e {
                ClausifyError::NotRqfo { reason, .. }
                    if reason == "quantified variables have no guard" =>
                {
                    not_rqfo(f, &reason)
                }
                other => other,
            })
        }
        _ => Err(not_rqfo(f, "unexpected connective")),
    }
}

/// Splits `body` into a guard and a rest under the quantified `vars`.
/// For `existential`, the guard is a positive atom among the conjuncts;
/// otherwise a negated atom among the disjuncts.
fn guarded(body: &Formula, vars: &[String], existential: bool) -> Result<Formula, ClausifyError> {
    let items: Vec<Formula> = match (body, existential) {
        (Formula::And(gs), true) | (Formula::Or(gs), false) => gs.clone(),
        (other, _) => vec![other.clone()],
    };
    let guard_of = |g: &Formula| -> Option<Atom> {
        match (g, existential) {
            (Formula::Atom(a), true) => Some(a.clone()),
            (Formula::Not(inner), false) => match inner.as_ref() {
                Formula::Atom(a) => Some(a.clone()),
                _ => None,
            },
            _ => None,
        }
    };
    let pick = items.iter().position(|g| {
        guard_of(g).is_some_and(|a| vars.is_empty() || vars.iter().any(|v| a.vars().contains(v)))
    });
    let Some(i) = pick else {
        if vars.is_empty() {
            let parts = items.iter().map(recognize).collect::<Result<Vec<_>, _>>()?;
            return Ok(if existential {
                Formula::and(parts)
            } else {
                Formula::or(parts)
            });
        }
        return Err(not_rqfo(body, "quantified variables have no guard"));
    };
    let guard = guard_of(&items[i]).unwrap();
    let guard_vars: BTreeSet<String> = guard.vars();
    let bound: Vec<String> = vars
        .iter()
        .filter(|v| guard_vars.contains(*v))
        .cloned()
        .collect();
    let remaining: Vec<String> = vars
        .iter()
        .filter(|v| !guard_vars.contains(*v))
        .cloned()
        .collect();
    let rest_items: Vec<Formula> = items
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != i)
        .map(|(_, g)| g.clone())
        .collect();
    let rest = if existential {
        Formula::exists(remaining, Formula::and(rest_items))
    } else {
        Formula::forall(remaining, Formula::or(rest_items))
    };
    let body = Box::new(recognize(&rest)?);
    Ok(if existential {
        Formula::ExistsRel {
            vars: bound,
            guard,
            body,
        }
    } else {
        Formula::ForallRel {
            vars: bound,
            guard,
            body,
        }
    })
}

/// Negation pushed through a relativized formula, staying relativized.
pub fn negate_rqfo(f: &Formula) -> Result<Formula, ClausifyError> {
    Ok(match f {
        Formula::True => Formula::False,
        Formula::False => Formula::True,
        Formula::And(gs) => Formula::Or(gs.iter().map(negate_rqfo).collect::<Result<_, _>>()?),
        Formula::Or(gs) => Formula::And(gs.iter().map(negate_rqfo).collect::<Result<_, _>>()?),
        Formula::ForallRel { vars, guard, body } => Formula::ExistsRel {
            vars: vars.clone(),
            guard: guard.clone(),
            body: Box::new(negate_rqfo(body)?),
        },
        Formula::ExistsRel { vars, guard, body } => Formula::ForallRel {
            vars: vars.clone(),
            guard: guard.clone(),
            body: Box::new(negate_rqfo(body)?),
        },
        other => return Err(not_rqfo(other, "not a relativized formula")),
    })
}

/// True if the formula is built only from `true`, `false`, `∧`, `∨` and
/// relativized quantifiers over relational atoms.
pub fn is_rqfo(f: &Formula) -> bool {
    match f {
        Formula::True | Formula::False => true,
        Formula::And(gs) | Formula::Or(gs) => gs.iter().all(is_rqfo),
        Formula::ForallRel { vars, guard, body } | Formula::ExistsRel { vars, guard, body } => {
            let gv = guard.vars();
            guard.is_relational() && vars.iter().all(|v| gv.contains(v)) && is_rqfo(body)
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::Term;
    use crate::syntax::parse_formula;

    fn x() -> Term {
        Term::var("X")
    }
    fn y() -> Term {
        Term::var("Y")
    }

    fn running_example() -> Formula {
        Formula::ForallRel {
            vars: vec!["X".into()],
            guard: Atom::new("r", vec![x()]),
            body: Box::new(Formula::ExistsRel {
                vars: vec!["Y".into()],
                guard: Atom::new("s", vec![x(), y()]),
                body: Box::new(Formula::True),
            }),
        }
    }

    #[test]
    fn recognizes_guarded_quantifiers() {
        let f = parse_formula("all X. (~r(X) | ex Y. (s(X,Y) & true))").unwrap();
        assert_eq!(to_rqfo(&f).unwrap(), running_example());
    }

    #[test]
    fn printed_rqfo_reparses() {
        let f = running_example();
        let again = to_rqfo(&parse_formula(&f.to_string()).unwrap()).unwrap();
        assert_eq!(again, f);
        assert!(is_rqfo(&again));
    }

    #[test]
    fn rejects_unguarded_and_compound() {
        let err = to_rqfo(&parse_formula("all X. p(X)").unwrap()).unwrap_err();
        assert!(matches!(err, ClausifyError::NotRqfo { .. }));
        assert!(to_rqfo(&parse_formula("p(f(a))").unwrap()).is_err());
    }

    #[test]
    fn splits_quantifier_runs() {
        let f = parse_formula("ex X Y. (r(X) & s(X,Y))").unwrap();
        let expected = Formula::ExistsRel {
            vars: vec!["X".into()],
            guard: Atom::new("r", vec![x()]),
            body: Box::new(Formula::ExistsRel {
                vars: vec!["Y".into()],
                guard: Atom::new("s", vec![x(), y()]),
                body: Box::new(Formula::True),
            }),
        };
        assert_eq!(to_rqfo(&f).unwrap(), expected);
    }

    #[test]
    fn negation_matches_example_and_is_involutive() {
        let f = running_example();
        let neg = negate_rqfo(&f).unwrap();
        let expected = Formula::ExistsRel {
            vars: vec!["X".into()],
            guard: Atom::new("r", vec![x()]),
            body: Box::new(Formula::ForallRel {
                vars: vec!["Y".into()],
                guard: Atom::new("s", vec![x(), y()]),
                body: Box::new(Formula::False),
            }),
        };
        assert_eq!(neg, expected);
        assert_eq!(negate_rqfo(&neg).unwrap(), f);
    }
}
