use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::formula::Formula;
use super::term::{Atom, Clause, Literal, Term};
use super::vocab::garg;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubstError {
    #[error("substitution would capture variable {0}")]
    Capture(String),
    #[error("substitution is not injective")]
    NotInjective,
    #[error("substitution range is not ground")]
    NotGround,
    #[error("range term {0} is not a ground argument of the formula")]
    RangeNotArgument(String),
    #[error("domain variable {0} already occurs in the formula")]
    DomainNotFresh(String),
}

/// A finite mapping from variable names to terms. Identity bindings are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Substitution {
    map: BTreeMap<String, Term>,
}

impl Substitution {
    pub fn new() -> Substitution {
        Substitution::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (String, Term)>) -> Substitution {
        let mut s = Substitution::new();
        for (v, t) in pairs {
            s.bind(v, t);
        }
        s
    }

    pub fn bind(&mut self, var: impl Into<String>, term: Term) {
        let var = var.into();
        if term == Term::Var(var.clone()) {
            self.map.remove(&var);
        } else {
            self.map.insert(var, term);
        }
    }

    pub fn get(&self, var: &str) -> Option<&Term> {
        self.map.get(var)
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Term)> {
        self.map.iter()
    }

    pub fn domain(&self) -> BTreeSet<String> {
        self.map.keys().cloned().collect()
    }

    pub fn range(&self) -> Vec<&Term> {
        self.map.values().collect()
    }

    pub fn is_ground(&self) -> bool {
        self.map.values().all(Term::is_ground)
    }

    pub fn is_injective(&self) -> bool {
        let set: BTreeSet<&Term> = self.map.values().collect();
        set.len() == self.map.len()
    }

    pub fn without(&self, vars: &[String]) -> Substitution {
        let mut s = self.clone();
        for v in vars {
            s.map.remove(v);
        }
        s
    }

    /// The substitution `self` followed by `then`.
    pub fn compose(&self, then: &Substitution) -> Substitution {
        let mut out = Substitution::new();
        for (v, t) in &self.map {
            out.bind(v.clone(), then.apply_term(t));
        }
        for (v, t) in &then.map {
            if !self.map.contains_key(v) {
                out.bind(v.clone(), t.clone());
            }
        }
        out
    }

    pub fn apply_term(&self, t: &Term) -> Term {
        if self.map.is_empty() {
            return t.clone();
        }
        t.replace_top_down(&mut |s| match s {
            Term::Var(v) => Some(self.map.get(v).cloned().unwrap_or_else(|| s.clone())),
            _ => None,
        })
    }

    pub fn apply_atom(&self, a: &Atom) -> Atom {
        a.map_args(|t| self.apply_term(t))
    }

    pub fn apply_literal(&self, l: &Literal) -> Literal {
        l.map_args(|t| self.apply_term(t))
    }

    pub fn apply_clause(&self, c: &Clause) -> Clause {
        Clause::new(c.literals.iter().map(|l| self.apply_literal(l)).collect())
    }

    /// Applies the substitution to free occurrences, failing on variable capture.
    pub fn apply_formula(&self, f: &Formula) -> Result<Formula, SubstError> {
        if self.map.is_empty() {
            return Ok(f.clone());
        }
        Ok(match f {
            Formula::True | Formula::False => f.clone(),
            Formula::Atom(a) => Formula::Atom(self.apply_atom(a)),
            Formula::Not(g) => Formula::not(self.apply_formula(g)?),
            Formula::And(gs) => Formula::And(
                gs.iter()
                    .map(|g| self.apply_formula(g))
                    .collect::<Result<_, _>>()?,
            ),
            Formula::Or(gs) => Formula::Or(
                gs.iter()
                    .map(|g| self.apply_formula(g))
                    .collect::<Result<_, _>>()?,
            ),
            Formula::Forall(v, g) | Formula::Exists(v, g) => {
                let inner = self.under_binders(std::slice::from_ref(v), g)?;
                let body = Box::new(inner.apply_formula(g)?);
                if matches!(f, Formula::Forall(..)) {
                    Formula::Forall(v.clone(), body)
                } else {
                    Formula::Exists(v.clone(), body)
                }
            }
            Formula::ForallRel { vars, guard, body } | Formula::ExistsRel { vars, guard, body } => {
                let scope = Formula::and([Formula::Atom(guard.clone()), (**body).clone()]);
                let inner = self.under_binders(vars, &scope)?;
                let guard = inner.apply_atom(guard);
                let body = Box::new(inner.apply_formula(body)?);
                if matches!(f, Formula::ForallRel { .. }) {
                    Formula::ForallRel {
                        vars: vars.clone(),
                        guard,
                        body,
                    }
                } else {
                    Formula::ExistsRel {
                        vars: vars.clone(),
                        guard,
                        body,
                    }
                }
            }
        })
    }

    fn under_binders(
        &self,
        binders: &[String],
        scope: &Formula,
    ) -> Result<Substitution, SubstError> {
        let inner = self.without(binders);
        for v in scope.free_vars() {
            if binders.contains(&v) {
                continue;
            }
            if let Some(t) = inner.get(&v) {
                if let Some(b) = binders.iter().find(|b| t.has_var(b)) {
                    return Err(SubstError::Capture(b.clone()));
                }
            }
        }
        Ok(inner)
    }

    fn reverse_map(&self) -> Result<BTreeMap<Term, String>, SubstError> {
        if !self.is_injective() {
            return Err(SubstError::NotInjective);
        }
        Ok(self
            .map
            .iter()
            .map(|(v, t)| (t.clone(), v.clone()))
            .collect())
    }

    /// Replaces every occurrence of a range term that is not inside another
    /// replaced occurrence by its variable.
    pub fn inverse_term(&self, t: &Term) -> Result<Term, SubstError> {
        let rev = self.reverse_map()?;
        Ok(inverse_with(&rev, t))
    }

    /// Inverse substitution applied to every term position of a formula.
    pub fn inverse_formula(&self, f: &Formula) -> Result<Formula, SubstError> {
        let rev = self.reverse_map()?;
        Ok(f.map_atoms(&mut |a| a.map_args(|t| inverse_with(&rev, t))))
    }

    /// Replaces only occurrences that are whole atom arguments.
    ///
    /// Requires a ground, injective substitution whose range terms are ground
    /// arguments of `f` and whose domain variables do not occur in `f`.
    pub fn top_inverse_formula(&self, f: &Formula) -> Result<Formula, SubstError> {
        let rev = self.reverse_map()?;
        if !self.is_ground() {
            return Err(SubstError::NotGround);
        }
        let args = garg(f);
        for t in self.map.values() {
            if !args.contains(t) {
                return Err(SubstError::RangeNotArgument(format!("{t:?}")));
            }
        }
        let used = f.all_vars();
        for v in self.map.keys() {
            if used.contains(v) {
                return Err(SubstError::DomainNotFresh(v.clone()));
            }
        }
        Ok(f.map_atoms(&mut |a| {
            a.map_args(|t| match rev.get(t) {
                Some(v) => Term::Var(v.clone()),
                None => t.clone(),
            })
        }))
    }
}

fn inverse_with(rev: &BTreeMap<Term, String>, t: &Term) -> Term {
    t.replace_top_down(&mut |s| rev.get(s).map(|v| Term::Var(v.clone())))
}

/// One-way matching: extends `subst` so that `pattern·subst == target`.
pub fn match_term(pattern: &Term, target: &Term, subst: &mut Substitution) -> bool {
    match pattern {
        Term::Var(v) => match subst.map.get(v) {
            Some(bound) => bound == target,
            None => {
                subst.map.insert(v.clone(), target.clone());
                true
            }
        },
        Term::App(f, ps) => match target {
            Term::App(g, ts) if f == g && ps.len() == ts.len() => {
                ps.iter().zip(ts).all(|(p, t)| match_term(p, t, subst))
            }
            _ => false,
        },
    }
}

pub fn match_atom(pattern: &Atom, target: &Atom, subst: &mut Substitution) -> bool {
    pattern.pred == target.pred
        && pattern.args.len() == target.args.len()
        && pattern
            .args
            .iter()
            .zip(&target.args)
            .all(|(p, t)| match_term(p, t, subst))
}

pub fn match_literal(pattern: &Literal, target: &Literal, subst: &mut Substitution) -> bool {
    pattern.positive == target.positive && match_atom(&pattern.atom, &target.atom, subst)
}

/// Finds a substitution making `pattern` equal to `target` literal by literal,
/// allowing any permutation of the pattern's literals.
pub fn match_clause(pattern: &Clause, target: &Clause) -> Option<Substitution> {
    if pattern.len() != target.len() {
        return None;
    }
    let mut used = vec![false; pattern.len()];
    fn go(
        pattern: &Clause,
        target: &Clause,
        i: usize,
        used: &mut Vec<bool>,
        subst: &Substitution,
    ) -> Option<Substitution> {
        if i == target.len() {
            return Some(subst.clone());
        }
        // try the literal at the same index first so ordered instances match directly
        let order = std::iter::once(i).chain((0..pattern.len()).filter(move |&j| j != i));
        for j in order {
            if used[j] {
                continue;
            }
            let mut s = subst.clone();
            if match_literal(&pattern.literals[j], &target.literals[i], &mut s) {
                used[j] = true;
                if let Some(r) = go(pattern, target, i + 1, used, &s) {
                    return Some(r);
                }
                used[j] = false;
            }
        }
        None
    }
    go(pattern, target, 0, &mut used, &Substitution::new())
}

/// True if the two clauses are equal up to a bijective variable renaming.
pub fn is_variant(a: &Clause, b: &Clause) -> bool {
    match (match_clause(a, b), match_clause(b, a)) {
        (Some(s), Some(_)) => s.range().iter().all(|t| t.is_var()) && s.is_injective(),
        _ => false,
    }
}
