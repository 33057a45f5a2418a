use std::collections::BTreeSet;

use crate::logic::{Atom, Clause, Formula, FreshNames, Literal, Substitution, Term};
use crate::tableau::{ClauseMeta, Side, SidedClause};

use super::definitional::Definitions;
use super::ClausifyError;

/// A clause set together with where it came from.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClausalForm {
    pub clauses: Vec<Clause>,
    /// Definitional metadata, parallel to `clauses`.
    pub meta: Vec<Option<ClauseMeta>>,
    pub side: Option<Side>,
    /// Function symbols introduced by Skolemization.
    pub skolem_funs: BTreeSet<String>,
    pub definitions: Option<Definitions>,
}

impl ClausalForm {
    pub fn new(clauses: Vec<Clause>) -> ClausalForm {
        let meta = vec![None; clauses.len()];
        ClausalForm {
            clauses,
            meta,
            ..ClausalForm::default()
        }
    }

    pub fn with_side(mut self, side: Side) -> ClausalForm {
        self.side = Some(side);
        self
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn push(&mut self, clause: Clause, meta: Option<ClauseMeta>) {
        self.clauses.push(clause);
        self.meta.push(meta);
    }

    pub fn has_empty_clause(&self) -> bool {
        self.clauses.iter().any(Clause::is_empty)
    }

    /// Function symbols (constants included) of all clauses.
    pub fn funs(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.clauses.iter().for_each(|c| c.funs_into(&mut out));
        out
    }

    pub fn sided(&self) -> Vec<SidedClause> {
        self.clauses
            .iter()
            .zip(&self.meta)
            .map(|(c, m)| SidedClause {
                clause: c.clone(),
                meta: m.clone(),
            })
            .collect()
    }

    /// The universal closure of the conjunction of all clauses.
    pub fn to_formula(&self) -> Formula {
        Formula::and(self.clauses.iter().map(clause_formula))
    }
}

/// The universal closure of a clause.
pub fn clause_formula(c: &Clause) -> Formula {
    let body = Formula::or(c.literals.iter().map(Formula::literal));
    let vars: Vec<String> = c.vars().into_iter().collect();
    Formula::forall(vars, body)
}

/// Plain clausification: negation normal form, inner Skolemization and
/// conjunctive normal form by distribution.
///
/// One `Clausifier` keeps Skolem names distinct across several formulas.
#[derive(Clone, Debug)]
pub struct Clausifier {
    names: FreshNames,
    rename_threshold: Option<usize>,
}

impl Default for Clausifier {
    fn default() -> Self {
        Clausifier::new(std::iter::empty())
    }
}

impl Clausifier {
    /// A clausifier whose fresh symbols avoid `used`.
    pub fn new(used: impl IntoIterator<Item = String>) -> Clausifier {
        Clausifier {
            names: FreshNames::avoiding(used),
            rename_threshold: None,
        }
    }

    /// A clausifier avoiding every symbol of the given formulas.
    pub fn for_formulas<'a>(formulas: impl IntoIterator<Item = &'a Formula>) -> Clausifier {
        let mut used = BTreeSet::new();
        for f in formulas {
            used.extend(crate::logic::vocabulary(f).names());
        }
        Clausifier::new(used)
    }

    /// Introduce definitions for disjunction operands when distributing would
    /// produce more than `threshold` clauses. Preserves satisfiability only.
    pub fn with_renaming(mut self, threshold: usize) -> Clausifier {
        self.rename_threshold = Some(threshold);
        self
    }

    pub fn reserve(&mut self, names: impl IntoIterator<Item = String>) {
        self.names.reserve_all(names);
    }

    pub fn clausify(&mut self, f: &Formula) -> Result<ClausalForm, ClausifyError> {
        let fv = f.free_vars();
        if !fv.is_empty() {
            return Err(ClausifyError::NotSentence(fv.into_iter().collect()));
        }
        let nnf = f.expand_relativized().nnf();
        let mut var_names = FreshNames::new();
        let unique = rename_binders(&nnf, &mut var_names, &Substitution::new());
        let mut skolem_funs = BTreeSet::new();
        let skolemized = self.skolemize(&unique, &mut skolem_funs);
        let matrix = strip_universals(&skolemized);
        let mut extra = Vec::new();
        let mut clauses = self.cnf(&matrix, &mut extra);
        clauses.extend(extra);
        let mut out: Vec<Clause> = Vec::new();
        for lits in clauses {
            let mut dedup: Vec<Literal> = Vec::new();
            for l in lits {
                if !dedup.contains(&l) {
                    dedup.push(l);
                }
            }
            let c = Clause::new(dedup).normalize_vars();
            if !out.contains(&c) {
                out.push(c);
            }
        }
        let mut form = ClausalForm::new(out);
        form.skolem_funs = skolem_funs;
        Ok(form)
    }

    fn skolemize(&mut self, f: &Formula, skolems: &mut BTreeSet<String>) -> Formula {
        match f {
            Formula::Exists(v, body) => {
                let args: Vec<Term> = f.free_vars().into_iter().map(Term::Var).collect();
                let name = self.names.fresh("sk");
                skolems.insert(name.clone());
                let s = Substitution::from_pairs([(v.clone(), Term::App(name, args))]);
                let body = s
                    .apply_formula(body)
                    .expect("binders are unique, so Skolem terms cannot be captured");
                self.skolemize(&body, skolems)
            }
            Formula::Forall(v, body) => {
                Formula::Forall(v.clone(), Box::new(self.skolemize(body, skolems)))
            }
            Formula::And(gs) => {
                Formula::And(gs.iter().map(|g| self.skolemize(g, skolems)).collect())
            }
            Formula::Or(gs) => Formula::Or(gs.iter().map(|g| self.skolemize(g, skolems)).collect()),
            _ => f.clone(),
        }
    }

    fn cnf(&mut self, f: &Formula, extra: &mut Vec<Vec<Literal>>) -> Vec<Vec<Literal>> {
        match f {
            Formula::True => Vec::new(),
            Formula::False => vec![Vec::new()],
            Formula::And(gs) => gs.iter().flat_map(|g| self.cnf(g, extra)).collect(),
            Formula::Or(gs) => {
                let mut parts: Vec<Vec<Vec<Literal>>> =
                    gs.iter().map(|g| self.cnf(g, extra)).collect();
                if let Some(limit) = self.rename_threshold {
                    let product = parts
                        .iter()
                        .fold(1usize, |acc, p| acc.saturating_mul(p.len().max(1)));
                    if product > limit {
                        for (g, part) in gs.iter().zip(parts.iter_mut()) {
                            if part.len() > 1 {
                                let def = self.define(g, part, extra);
                                *part = vec![vec![def]];
                            }
                        }
                    }
                }
                let mut acc: Vec<Vec<Literal>> = vec![Vec::new()];
                for part in parts {
                    let mut next = Vec::with_capacity(acc.len() * part.len());
                    for a in &acc {
                        for p in &part {
                            let mut c = a.clone();
                            c.extend(p.iter().cloned());
                            next.push(c);
                        }
                    }
                    acc = next;
                }
                acc
            }
            other => match other.as_literal() {
                Some(l) => vec![vec![l]],
                None => unreachable!("matrix is in negation normal form without quantifiers"),
            },
        }
    }

    fn define(
        &mut self,
        g: &Formula,
        part: &[Vec<Literal>],
        extra: &mut Vec<Vec<Literal>>,
    ) -> Literal {
        let args: Vec<Term> = g.free_vars().into_iter().map(Term::Var).collect();
        let atom = Atom::new(self.names.fresh("def"), args);
        for c in part {
            let mut clause = vec![Literal::neg(atom.clone())];
            clause.extend(c.iter().cloned());
            extra.push(clause);
        }
        Literal::pos(atom)
    }
}

/// Clausifies a single sentence with a fresh clausifier.
pub fn clausify(f: &Formula) -> Result<ClausalForm, ClausifyError> {
    Clausifier::for_formulas([f]).clausify(f)
}

/// Gives every binder a distinct name.
fn rename_binders(f: &Formula, names: &mut FreshNames, env: &Substitution) -> Formula {
    match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Atom(a) => Formula::Atom(env.apply_atom(a)),
        Formula::Not(g) => Formula::not(rename_binders(g, names, env)),
        Formula::And(gs) => {
            Formula::And(gs.iter().map(|g| rename_binders(g, names, env)).collect())
        }
        Formula::Or(gs) => Formula::Or(gs.iter().map(|g| rename_binders(g, names, env)).collect()),
        Formula::Forall(v, g) | Formula::Exists(v, g) => {
            let fresh = names.fresh_like(v);
            let mut inner = env.clone();
            inner.bind(v.clone(), Term::Var(fresh.clone()));
            let body = Box::new(rename_binders(g, names, &inner));
            if matches!(f, Formula::Forall(..)) {
                Formula::Forall(fresh, body)
            } else {
                Formula::Exists(fresh, body)
            }
        }
        Formula::ForallRel { .. } | Formula::ExistsRel { .. } => {
            rename_binders(&f.expand_relativized(), names, env)
        }
    }
}

fn strip_universals(f: &Formula) -> Formula {
    match f {
        Formula::Forall(_, g) => strip_universals(g),
        Formula::And(gs) => Formula::And(gs.iter().map(strip_universals).collect()),
        Formula::Or(gs) => Formula::Or(gs.iter().map(strip_universals).collect()),
        _ => f.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::is_variant;
    use crate::syntax::{parse_formula, parse_literal};

    fn clause(lits: &[&str]) -> Clause {
        Clause::new(lits.iter().map(|l| parse_literal(l).unwrap()).collect())
    }

    #[test]
    fn distributes_disjunction() {
        let f = parse_formula("(p & q) | r").unwrap();
        let cf = clausify(&f).unwrap();
        assert_eq!(cf.clauses, vec![clause(&["p", "r"]), clause(&["q", "r"])]);
    }

    #[test]
    fn inner_skolemization_uses_only_free_variables() {
        let f = parse_formula("all X. all Y. (p(Y) | ex Z. q(X, Z))").unwrap();
        let cf = clausify(&f).unwrap();
        assert_eq!(cf.clauses.len(), 1);
        let sk = cf.skolem_funs.iter().next().unwrap().clone();
        let expected = Clause::new(vec![
            parse_literal("p(Y)").unwrap(),
            Literal::pos(Atom::new(
                "q",
                vec![Term::var("X"), Term::app(sk, vec![Term::var("X")])],
            )),
        ]);
        assert!(is_variant(&cf.clauses[0], &expected));
    }

    #[test]
    fn skolem_names_avoid_input_symbols() {
        let f = parse_formula("ex X. p(X, sk0)").unwrap();
        let cf = clausify(&f).unwrap();
        assert!(!cf.skolem_funs.contains("sk0"));
    }

    #[test]
    fn constants_fold() {
        assert!(clausify(&Formula::True).unwrap().is_empty());
        assert!(clausify(&Formula::False).unwrap().has_empty_clause());
    }

    #[test]
    fn rejects_open_formulas() {
        let f = parse_formula("p(X)").unwrap();
        assert!(matches!(clausify(&f), Err(ClausifyError::NotSentence(_))));
    }

    #[test]
    fn renaming_bounds_clause_count() {
        let f = parse_formula("(a1 & a2 & a3) | (b1 & b2 & b3) | (c1 & c2 & c3) | (d1 & d2 & d3)")
            .unwrap();
        let plain = clausify(&f).unwrap();
        assert_eq!(plain.len(), 81);
        let renamed = Clausifier::for_formulas([&f])
            .with_renaming(16)
            .clausify(&f)
            .unwrap();
        assert!(renamed.len() <= 13);
    }

    #[test]
    fn binders_renamed_apart() {
        let f = parse_formula("(all X. p(X)) & (ex X. ~p(X))").unwrap();
        let cf = clausify(&f).unwrap();
        assert_eq!(cf.len(), 2);
        assert_eq!(cf.skolem_funs.len(), 1);
    }
}
