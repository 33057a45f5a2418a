use std::collections::{BTreeMap, BTreeSet};

use super::formula::Formula;
use super::term::{Atom, Clause, Literal, Polarity, Term};

/// Symbols of a formula. Predicates carry the polarity of each occurrence.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Vocabulary {
    pub preds: BTreeSet<(String, Polarity)>,
    /// Function symbols, constants included.
    pub funs: BTreeSet<String>,
    pub consts: BTreeSet<String>,
    /// Terms occurring as atom arguments.
    pub pargs: BTreeSet<Term>,
}

impl Vocabulary {
    pub fn pred_names(&self) -> BTreeSet<String> {
        self.preds.iter().map(|(p, _)| p.clone()).collect()
    }

    /// Every name in use: predicates, functions and variables of the source.
    pub fn names(&self) -> BTreeSet<String> {
        let mut out = self.pred_names();
        out.extend(self.funs.iter().cloned());
        out
    }

    pub fn merge(&mut self, other: &Vocabulary) {
        self.preds.extend(other.preds.iter().cloned());
        self.funs.extend(other.funs.iter().cloned());
        self.consts.extend(other.consts.iter().cloned());
        self.pargs.extend(other.pargs.iter().cloned());
    }

    fn add_atom(&mut self, a: &Atom, pol: Polarity) {
        self.preds.insert((a.pred.clone(), pol));
        for t in &a.args {
            t.funs_into(&mut self.funs);
            t.consts_into(&mut self.consts);
            self.pargs.insert(t.clone());
        }
    }
}

pub fn vocabulary(f: &Formula) -> Vocabulary {
    let mut v = Vocabulary::default();
    visit_signed(f, Polarity::Positive, &mut |a, pol| v.add_atom(a, pol));
    v
}

pub fn clause_vocabulary<'a>(clauses: impl IntoIterator<Item = &'a Clause>) -> Vocabulary {
    let mut v = Vocabulary::default();
    for c in clauses {
        for l in &c.literals {
            v.add_atom(&l.atom, l.polarity());
        }
    }
    v
}

/// Visits atoms together with the polarity of their occurrence.
pub fn visit_signed(f: &Formula, pol: Polarity, visit: &mut impl FnMut(&Atom, Polarity)) {
    match f {
        Formula::True | Formula::False => {}
        Formula::Atom(a) => visit(a, pol),
        Formula::Not(g) => visit_signed(g, pol.flip(), visit),
        Formula::And(gs) | Formula::Or(gs) => gs.iter().for_each(|g| visit_signed(g, pol, visit)),
        Formula::Forall(_, g) | Formula::Exists(_, g) => visit_signed(g, pol, visit),
        Formula::ForallRel { guard, body, .. } => {
            visit(guard, pol.flip());
            visit_signed(body, pol, visit);
        }
        Formula::ExistsRel { guard, body, .. } => {
            visit(guard, pol);
            visit_signed(body, pol, visit);
        }
    }
}

/// Literals occurring in a formula, as atom with polarity.
pub fn literal_occurrences(f: &Formula) -> BTreeSet<Literal> {
    let mut out = BTreeSet::new();
    visit_signed(f, Polarity::Positive, &mut |a, pol| {
        out.insert(Literal::new(pol == Polarity::Positive, a.clone()));
    });
    out
}

/// Ground terms occurring as atom arguments.
pub fn garg(f: &Formula) -> BTreeSet<Term> {
    vocabulary(f)
        .pargs
        .into_iter()
        .filter(Term::is_ground)
        .collect()
}

pub fn literal_garg<'a>(lits: impl IntoIterator<Item = &'a Literal>) -> BTreeSet<Term> {
    let mut out = BTreeSet::new();
    for l in lits {
        out.extend(l.atom.args.iter().filter(|t| t.is_ground()).cloned());
    }
    out
}

/// Arity of every predicate and function symbol; `Err` names a symbol used
/// with two different arities.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    pub preds: BTreeMap<String, usize>,
    pub funs: BTreeMap<String, usize>,
}

impl Signature {
    pub fn of_formula(f: &Formula) -> Result<Signature, String> {
        let mut sig = Signature::default();
        let mut err = None;
        f.visit_atoms(&mut |a| {
            if err.is_none() {
                if let Err(e) = sig.add_atom(a) {
                    err = Some(e);
                }
            }
        });
        match err {
            Some(e) => Err(e),
            None => Ok(sig),
        }
    }

    pub fn of_clauses<'a>(
        clauses: impl IntoIterator<Item = &'a Clause>,
    ) -> Result<Signature, String> {
        let mut sig = Signature::default();
        for c in clauses {
            for l in &c.literals {
                sig.add_atom(&l.atom)?;
            }
        }
        Ok(sig)
    }

    pub fn add_atom(&mut self, a: &Atom) -> Result<(), String> {
        check(&mut self.preds, &a.pred, a.args.len())?;
        for t in &a.args {
            self.add_term(t)?;
        }
        Ok(())
    }

    fn add_term(&mut self, t: &Term) -> Result<(), String> {
        if let Term::App(f, args) = t {
            check(&mut self.funs, f, args.len())?;
            for a in args {
                self.add_term(a)?;
            }
        }
        Ok(())
    }
}

fn check(map: &mut BTreeMap<String, usize>, name: &str, arity: usize) -> Result<(), String> {
    match map.get(name) {
        Some(&n) if n != arity => Err(name.to_string()),
        Some(_) => Ok(()),
        None => {
            map.insert(name.to_string(), arity);
            Ok(())
        }
    }
}
