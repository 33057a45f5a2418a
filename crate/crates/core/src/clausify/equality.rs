use std::collections::BTreeMap;

use crate::logic::{Atom, Clause, Literal, Term};

use super::standard::ClausalForm;

/// Predicate name treated as equality.
pub const EQUALITY: &str = "eq";

fn eq(a: Term, b: Term) -> Atom {
    Atom::new(EQUALITY, vec![a, b])
}

fn vars(prefix: &str, n: usize) -> Vec<Term> {
    (1..=n).map(|i| Term::var(format!("{prefix}{i}"))).collect()
}

/// Symbols with their arities, excluding equality itself and constants.
fn symbols(cf: &ClausalForm) -> (BTreeMap<String, usize>, BTreeMap<String, usize>) {
    let mut preds = BTreeMap::new();
    let mut funs = BTreeMap::new();
    fn walk(t: &Term, funs: &mut BTreeMap<String, usize>) {
        if let Term::App(f, args) = t {
            if !args.is_empty() {
                funs.insert(f.clone(), args.len());
            }
            args.iter().for_each(|a| walk(a, funs));
        }
    }
    for c in &cf.clauses {
        for l in &c.literals {
            if l.atom.pred != EQUALITY && !l.atom.args.is_empty() {
                preds.insert(l.atom.pred.clone(), l.atom.args.len());
            }
            l.atom.args.iter().for_each(|a| walk(a, &mut funs));
        }
    }
    (preds, funs)
}

fn mentions_equality(cf: &ClausalForm) -> bool {
    cf.clauses
        .iter()
        .any(|c| c.literals.iter().any(|l| l.atom.pred == EQUALITY))
}

/// Reflexivity, symmetry and transitivity of `eq`.
pub fn equivalence_axioms() -> Vec<Clause> {
    let (x, y, z) = (Term::var("X"), Term::var("Y"), Term::var("Z"));
    vec![
        Clause::new(vec![Literal::pos(eq(x.clone(), x.clone()))]),
        Clause::new(vec![
            Literal::neg(eq(x.clone(), y.clone())),
            Literal::pos(eq(y.clone(), x.clone())),
        ]),
        Clause::new(vec![
            Literal::neg(eq(x.clone(), y.clone())),
            Literal::neg(eq(y.clone(), z.clone())),
            Literal::pos(eq(x, z)),
        ]),
    ]
}

/// Substitutivity of `eq` for one argument position of each symbol.
pub fn substitutivity_axioms(
    preds: &BTreeMap<String, usize>,
    funs: &BTreeMap<String, usize>,
) -> Vec<Clause> {
    let mut out = Vec::new();
    for (p, &n) in preds {
        for i in 0..n {
            let xs = vars("X", n);
            let mut ys = xs.clone();
            ys[i] = Term::var("Y");
            out.push(Clause::new(vec![
                Literal::neg(eq(xs[i].clone(), Term::var("Y"))),
                Literal::neg(Atom::new(p.clone(), xs)),
                Literal::pos(Atom::new(p.clone(), ys)),
            ]));
        }
    }
    for (f, &n) in funs {
        for i in 0..n {
            let xs = vars("X", n);
            let mut ys = xs.clone();
            ys[i] = Term::var("Y");
            out.push(Clause::new(vec![
                Literal::neg(eq(xs[i].clone(), Term::var("Y"))),
                Literal::pos(eq(Term::app(f.clone(), xs), Term::app(f.clone(), ys))),
            ]));
        }
    }
    out
}

/// Adds equality axioms when either side mentions `eq`. Equivalence axioms go
/// to both sides; substitutivity axioms for a symbol go to each side where the
/// symbol occurs.
pub fn add_equality_axioms(red: &ClausalForm, blue: &ClausalForm) -> (ClausalForm, ClausalForm) {
    if !mentions_equality(red) && !mentions_equality(blue) {
        return (red.clone(), blue.clone());
    }
    let augment = |cf: &ClausalForm| {
        let mut out = cf.clone();
        let (preds, funs) = symbols(cf);
        for c in equivalence_axioms()
            .into_iter()
            .chain(substitutivity_axioms(&preds, &funs))
        {
            out.push(c, None);
        }
        out
    };
    (augment(red), augment(blue))
}
