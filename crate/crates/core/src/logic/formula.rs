use std::collections::BTreeSet;

use super::term::{Atom, Literal, Term};

/// First-order formulas with n-ary conjunction and disjunction.
///
/// `ForallRel` and `ExistsRel` are relativized quantifiers: `∀vs (¬guard ∨ body)` and
/// `∃vs (guard ∧ body)`. They only arise from [`crate::clausify::to_rqfo`] or from
/// extraction; the parser never produces them.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Atom(Atom),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
    ForallRel {
        vars: Vec<String>,
        guard: Atom,
        body: Box<Formula>,
    },
    ExistsRel {
        vars: Vec<String>,
        guard: Atom,
        body: Box<Formula>,
    },
}

impl Formula {
    pub fn atom(pred: impl Into<String>, args: Vec<Term>) -> Formula {
        Formula::Atom(Atom::new(pred, args))
    }

    pub fn literal(lit: &Literal) -> Formula {
        let a = Formula::Atom(lit.atom.clone());
        if lit.positive {
            a
        } else {
            Formula::not(a)
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    /// Flattening conjunction. Empty gives `True`, singletons unwrap.
    pub fn and(items: impl IntoIterator<Item = Formula>) -> Formula {
        let mut out = Vec::new();
        for f in items {
            match f {
                Formula::And(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Formula::True,
            1 => out.pop().unwrap(),
            _ => Formula::And(out),
        }
    }

    /// Flattening disjunction. Empty gives `False`, singletons unwrap.
    pub fn or(items: impl IntoIterator<Item = Formula>) -> Formula {
        let mut out = Vec::new();
        for f in items {
            match f {
                Formula::Or(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Formula::False,
            1 => out.pop().unwrap(),
            _ => Formula::Or(out),
        }
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::or([Formula::not(a), b])
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and([
            Formula::implies(a.clone(), b.clone()),
            Formula::implies(b, a),
        ])
    }

    pub fn forall(vars: impl IntoIterator<Item = String>, body: Formula) -> Formula {
        let vars: Vec<String> = vars.into_iter().collect();
        vars.into_iter()
            .rev()
            .fold(body, |acc, v| Formula::Forall(v, Box::new(acc)))
    }

    pub fn exists(vars: impl IntoIterator<Item = String>, body: Formula) -> Formula {
        let vars: Vec<String> = vars.into_iter().collect();
        vars.into_iter()
            .rev()
            .fold(body, |acc, v| Formula::Exists(v, Box::new(acc)))
    }

    /// Conjunction with `true`/`false` folding.
    pub fn and_simplified(items: impl IntoIterator<Item = Formula>) -> Formula {
        let mut out = Vec::new();
        for f in items {
            match f {
                Formula::True => {}
                Formula::False => return Formula::False,
                Formula::And(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        Formula::and(out)
    }

    /// Disjunction with `true`/`false` folding.
    pub fn or_simplified(items: impl IntoIterator<Item = Formula>) -> Formula {
        let mut out = Vec::new();
        for f in items {
            match f {
                Formula::False => {}
                Formula::True => return Formula::True,
                Formula::Or(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        Formula::or(out)
    }

    pub fn universal_closure(self) -> Formula {
        let fv: Vec<String> = self.free_vars().into_iter().collect();
        Formula::forall(fv, self)
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.free_vars_into(&mut Vec::new(), &mut out);
        out
    }

    fn free_vars_into(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let add_atom = |a: &Atom, bound: &Vec<String>, out: &mut BTreeSet<String>| {
            for v in a.vars() {
                if !bound.contains(&v) {
                    out.insert(v);
                }
            }
        };
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => add_atom(a, bound, out),
            Formula::Not(f) => f.free_vars_into(bound, out),
            Formula::And(fs) | Formula::Or(fs) => {
                fs.iter().for_each(|f| f.free_vars_into(bound, out))
            }
            Formula::Forall(v, f) | Formula::Exists(v, f) => {
                bound.push(v.clone());
                f.free_vars_into(bound, out);
                bound.pop();
            }
            Formula::ForallRel { vars, guard, body } | Formula::ExistsRel { vars, guard, body } => {
                let n = bound.len();
                bound.extend(vars.iter().cloned());
                add_atom(guard, bound, out);
                body.free_vars_into(bound, out);
                bound.truncate(n);
            }
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// All variable names occurring anywhere, bound or free.
    pub fn all_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit_atoms(&mut |a| a.vars_into(&mut out));
        self.visit(&mut |f| match f {
            Formula::Forall(v, _) | Formula::Exists(v, _) => {
                out.insert(v.clone());
            }
            Formula::ForallRel { vars, .. } | Formula::ExistsRel { vars, .. } => {
                out.extend(vars.iter().cloned());
            }
            _ => {}
        });
        out
    }

    /// Pre-order visit of every subformula.
    pub fn visit(&self, f: &mut impl FnMut(&Formula)) {
        f(self);
        match self {
            Formula::Not(g) | Formula::Forall(_, g) | Formula::Exists(_, g) => g.visit(f),
            Formula::And(gs) | Formula::Or(gs) => gs.iter().for_each(|g| g.visit(f)),
            Formula::ForallRel { body, .. } | Formula::ExistsRel { body, .. } => body.visit(f),
            _ => {}
        }
    }

    /// Visits every atom, guards included.
    pub fn visit_atoms(&self, f: &mut impl FnMut(&Atom)) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => f(a),
            Formula::Not(g) | Formula::Forall(_, g) | Formula::Exists(_, g) => g.visit_atoms(f),
            Formula::And(gs) | Formula::Or(gs) => gs.iter().for_each(|g| g.visit_atoms(f)),
            Formula::ForallRel { guard, body, .. } | Formula::ExistsRel { guard, body, .. } => {
                f(guard);
                body.visit_atoms(f);
            }
        }
    }

    /// Rebuilds the formula with every atom mapped, guards included.
    pub fn map_atoms(&self, f: &mut impl FnMut(&Atom) -> Atom) -> Formula {
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Atom(a) => Formula::Atom(f(a)),
            Formula::Not(g) => Formula::Not(Box::new(g.map_atoms(f))),
            Formula::And(gs) => Formula::And(gs.iter().map(|g| g.map_atoms(f)).collect()),
            Formula::Or(gs) => Formula::Or(gs.iter().map(|g| g.map_atoms(f)).collect()),
            Formula::Forall(v, g) => Formula::Forall(v.clone(), Box::new(g.map_atoms(f))),
            Formula::Exists(v, g) => Formula::Exists(v.clone(), Box::new(g.map_atoms(f))),
            Formula::ForallRel { vars, guard, body } => Formula::ForallRel {
                vars: vars.clone(),
                guard: f(guard),
                body: Box::new(body.map_atoms(f)),
            },
            Formula::ExistsRel { vars, guard, body } => Formula::ExistsRel {
                vars: vars.clone(),
                guard: f(guard),
                body: Box::new(body.map_atoms(f)),
            },
        }
    }

    /// Replaces relativized quantifiers by their plain first-order reading.
    pub fn expand_relativized(&self) -> Formula {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => self.clone(),
            Formula::Not(g) => Formula::not(g.expand_relativized()),
            Formula::And(gs) => Formula::and(gs.iter().map(Formula::expand_relativized)),
            Formula::Or(gs) => Formula::or(gs.iter().map(Formula::expand_relativized)),
            Formula::Forall(v, g) => Formula::Forall(v.clone(), Box::new(g.expand_relativized())),
            Formula::Exists(v, g) => Formula::Exists(v.clone(), Box::new(g.expand_relativized())),
            Formula::ForallRel { vars, guard, body } => Formula::forall(
                vars.iter().cloned(),
                Formula::or([
                    Formula::not(Formula::Atom(guard.clone())),
                    body.expand_relativized(),
                ]),
            ),
            Formula::ExistsRel { vars, guard, body } => Formula::exists(
                vars.iter().cloned(),
                Formula::and([Formula::Atom(guard.clone()), body.expand_relativized()]),
            ),
        }
    }

    /// Negation normal form. Relativized quantifiers are dualized in place.
    pub fn nnf(&self) -> Formula {
        self.nnf_signed(true)
    }

    fn nnf_signed(&self, positive: bool) -> Formula {
        match (self, positive) {
            (Formula::True, true) | (Formula::False, false) => Formula::True,
            (Formula::True, false) | (Formula::False, true) => Formula::False,
            (Formula::Atom(a), true) => Formula::Atom(a.clone()),
            (Formula::Atom(a), false) => Formula::not(Formula::Atom(a.clone())),
            (Formula::Not(g), _) => g.nnf_signed(!positive),
            (Formula::And(gs), true) | (Formula::Or(gs), false) => {
                Formula::and(gs.iter().map(|g| g.nnf_signed(positive)))
            }
            (Formula::Or(gs), true) | (Formula::And(gs), false) => {
                Formula::or(gs.iter().map(|g| g.nnf_signed(positive)))
            }
            (Formula::Forall(v, g), true) | (Formula::Exists(v, g), false) => {
                Formula::Forall(v.clone(), Box::new(g.nnf_signed(positive)))
            }
            (Formula::Exists(v, g), true) | (Formula::Forall(v, g), false) => {
                Formula::Exists(v.clone(), Box::new(g.nnf_signed(positive)))
            }
            (Formula::ForallRel { vars, guard, body }, true)
            | (Formula::ExistsRel { vars, guard, body }, false) => Formula::ForallRel {
                vars: vars.clone(),
                guard: guard.clone(),
                body: Box::new(body.nnf_signed(positive)),
            },
            (Formula::ExistsRel { vars, guard, body }, true)
            | (Formula::ForallRel { vars, guard, body }, false) => Formula::ExistsRel {
                vars: vars.clone(),
                guard: guard.clone(),
                body: Box::new(body.nnf_signed(positive)),
            },
        }
    }

    /// Returns the literal if the formula is an atom or a negated atom.
    pub fn as_literal(&self) -> Option<Literal> {
        match self {
            Formula::Atom(a) => Some(Literal::pos(a.clone())),
            Formula::Not(g) => match g.as_ref() {
                Formula::Atom(a) => Some(Literal::neg(a.clone())),
                _ => None,
            },
            _ => None,
        }
    }

    pub fn is_quantifier_free(&self) -> bool {
        let mut qf = true;
        self.visit(&mut |f| {
            if matches!(
                f,
                Formula::Forall(..)
                    | Formula::Exists(..)
                    | Formula::ForallRel { .. }
                    | Formula::ExistsRel { .. }
            ) {
                qf = false;
            }
        });
        qf
    }

    /// Number of nodes in the syntax tree.
    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }

    /// Quantifier prefix and matrix of a prenex formula.
    pub fn split_prefix(&self) -> (Vec<(String, bool)>, &Formula) {
        let mut prefix = Vec::new();
        let mut cur = self;
        loop {
            match cur {
                Formula::Forall(v, g) => {
                    prefix.push((v.clone(), true));
                    cur = g;
                }
                Formula::Exists(v, g) => {
                    prefix.push((v.clone(), false));
                    cur = g;
                }
                _ => return (prefix, cur),
            }
        }
    }

    /// True for a prenex formula whose matrix is a conjunction of Horn clauses.
    pub fn is_horn(&self) -> bool {
        let (_, matrix) = self.split_prefix();
        if !matrix.is_quantifier_free() {
            return false;
        }
        let clause_ok = |c: &Formula| -> bool {
            let lits: Vec<&Formula> = match c {
                Formula::Or(ls) => ls.iter().collect(),
                other => vec![other],
            };
            let mut positives = 0;
            for l in lits {
                match l {
                    Formula::True | Formula::False => {}
                    _ => match l.as_literal() {
                        Some(lit) if lit.positive => positives += 1,
                        Some(_) => {}
                        None => return false,
                    },
                }
            }
            positives <= 1
        };
        match matrix {
            Formula::And(cs) => cs.iter().all(clause_ok),
            other => clause_ok(other),
        }
    }

    /// Structural equality up to renaming of bound variables.
    pub fn alpha_eq(&self, other: &Formula) -> bool {
        alpha_eq(self, other, &mut Vec::new())
    }
}

fn alpha_eq(a: &Formula, b: &Formula, env: &mut Vec<(String, String)>) -> bool {
    fn term_eq(s: &Term, t: &Term, env: &[(String, String)]) -> bool {
        match (s, t) {
            (Term::Var(x), Term::Var(y)) => {
                let lx = env.iter().rev().find(|(l, _)| l == x);
                let ry = env.iter().rev().find(|(_, r)| r == y);
                match (lx, ry) {
                    (Some((_, r)), Some((l, _))) => r == y && l == x,
                    (None, None) => x == y,
                    _ => false,
                }
            }
            (Term::App(f, xs), Term::App(g, ys)) => {
                f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| term_eq(x, y, env))
            }
            _ => false,
        }
    }
    fn atom_eq(a: &Atom, b: &Atom, env: &[(String, String)]) -> bool {
        a.pred == b.pred
            && a.args.len() == b.args.len()
            && a.args.iter().zip(&b.args).all(|(x, y)| term_eq(x, y, env))
    }
    match (a, b) {
        (Formula::True, Formula::True) | (Formula::False, Formula::False) => true,
        (Formula::Atom(x), Formula::Atom(y)) => atom_eq(x, y, env),
        (Formula::Not(x), Formula::Not(y)) => alpha_eq(x, y, env),
        (Formula::And(xs), Formula::And(ys)) | (Formula::Or(xs), Formula::Or(ys)) => {
            xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| alpha_eq(x, y, env))
        }
        (Formula::Forall(v, x), Formula::Forall(w, y))
        | (Formula::Exists(v, x), Formula::Exists(w, y)) => {
            env.push((v.clone(), w.clone()));
            let r = alpha_eq(x, y, env);
            env.pop();
            r
        }
        (
            Formula::ForallRel {
                vars: vs,
                guard: g1,
                body: b1,
            },
            Formula::ForallRel {
                vars: ws,
                guard: g2,
                body: b2,
            },
        )
        | (
            Formula::ExistsRel {
                vars: vs,
                guard: g1,
                body: b1,
            },
            Formula::ExistsRel {
                vars: ws,
                guard: g2,
                body: b2,
            },
        ) => {
            if vs.len() != ws.len() {
                return false;
            }
            let n = env.len();
            env.extend(vs.iter().cloned().zip(ws.iter().cloned()));
            let r = atom_eq(g1, g2, env) && alpha_eq(b1, b2, env);
            env.truncate(n);
            r
        }
        _ => false,
    }
}
