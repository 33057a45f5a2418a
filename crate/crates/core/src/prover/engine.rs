//! Interned terms with a trailed binding store, shared by the provers.

use std::collections::HashMap;
use std::rc::Rc;

use crate::logic::{Atom, Literal, Term};

pub(crate) type Sym = u32;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) enum PTerm {
    Var(u32),
    App(Sym, Rc<[PTerm]>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct PLit {
    pub positive: bool,
    pub pred: Sym,
    pub args: Rc<[PTerm]>,
}

#[derive(Default)]
pub(crate) struct Symbols {
    names: Vec<String>,
    index: HashMap<String, Sym>,
}

impl Symbols {
    pub fn intern(&mut self, name: &str) -> Sym {
        if let Some(&s) = self.index.get(name) {
            return s;
        }
        let s = self.names.len() as Sym;
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), s);
        s
    }

    pub fn name(&self, s: Sym) -> &str {
        &self.names[s as usize]
    }

    /// Converts a term, numbering its variables through `vars`.
    pub fn term(&mut self, t: &Term, vars: &mut Vec<String>) -> PTerm {
        match t {
            Term::Var(v) => {
                let i = match vars.iter().position(|n| n == v) {
                    Some(i) => i,
                    None => {
                        vars.push(v.clone());
                        vars.len() - 1
                    }
                };
                PTerm::Var(i as u32)
            }
            Term::App(f, args) => {
                let s = self.intern(f);
                PTerm::App(s, args.iter().map(|a| self.term(a, vars)).collect())
            }
        }
    }

    pub fn literal(&mut self, l: &Literal, vars: &mut Vec<String>) -> PLit {
        PLit {
            positive: l.positive,
            pred: self.intern(&l.atom.pred),
            args: l.atom.args.iter().map(|a| self.term(a, vars)).collect(),
        }
    }

    pub fn to_term(&self, t: &PTerm) -> Term {
        match t {
            PTerm::Var(i) => Term::Var(format!("_V{i}")),
            PTerm::App(s, args) => Term::App(
                self.name(*s).to_string(),
                args.iter().map(|a| self.to_term(a)).collect(),
            ),
        }
    }

    pub fn to_literal(&self, l: &PLit) -> Literal {
        Literal::new(
            l.positive,
            Atom::new(
                self.name(l.pred),
                l.args.iter().map(|a| self.to_term(a)).collect(),
            ),
        )
    }
}

/// Shifts every variable of a template by `offset`.
pub(crate) fn shift(t: &PTerm, offset: u32) -> PTerm {
    match t {
        PTerm::Var(i) => PTerm::Var(i + offset),
        PTerm::App(s, args) if args.is_empty() => PTerm::App(*s, args.clone()),
        PTerm::App(s, args) => PTerm::App(*s, args.iter().map(|a| shift(a, offset)).collect()),
    }
}

pub(crate) fn shift_lit(l: &PLit, offset: u32) -> PLit {
    PLit {
        positive: l.positive,
        pred: l.pred,
        args: l.args.iter().map(|a| shift(a, offset)).collect(),
    }
}

/// Variable bindings with an undo trail.
#[derive(Default)]
pub(crate) struct Bindings {
    vals: Vec<Option<PTerm>>,
    trail: Vec<u32>,
}

impl Bindings {
    /// Reserves `n` fresh variables and returns the first index.
    pub fn alloc(&mut self, n: u32) -> u32 {
        let first = self.vals.len() as u32;
        self.vals.extend(std::iter::repeat_n(None, n as usize));
        first
    }

    pub fn var_count(&self) -> u32 {
        self.vals.len() as u32
    }

    /// Drops variables allocated after `count`; they must be unbound.
    pub fn release(&mut self, count: u32) {
        self.vals.truncate(count as usize);
    }

    pub fn mark(&self) -> usize {
        self.trail.len()
    }

    /// True if a variable below `below` was bound after `mark`.
    pub fn bound_since(&self, mark: usize, below: u32) -> bool {
        self.trail[mark..].iter().any(|&v| v < below)
    }

    pub fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let v = self.trail.pop().unwrap();
            self.vals[v as usize] = None;
        }
    }

    fn deref<'a>(&'a self, mut t: &'a PTerm) -> &'a PTerm {
        while let PTerm::Var(i) = t {
            match &self.vals[*i as usize] {
                Some(b) => t = b,
                None => break,
            }
        }
        t
    }

    fn occurs(&self, v: u32, t: &PTerm) -> bool {
        match self.deref(t) {
            PTerm::Var(i) => *i == v,
            PTerm::App(_, args) => args.iter().any(|a| self.occurs(v, a)),
        }
    }

    fn bind(&mut self, v: u32, t: PTerm) {
        self.vals[v as usize] = Some(t);
        self.trail.push(v);
    }

    pub fn unify(&mut self, a: &PTerm, b: &PTerm) -> bool {
        let a = self.deref(a).clone();
        let b = self.deref(b).clone();
        match (&a, &b) {
            (PTerm::Var(i), PTerm::Var(j)) if i == j => true,
            (PTerm::Var(i), _) => {
                if self.occurs(*i, &b) {
                    return false;
                }
                self.bind(*i, b);
                true
            }
            (_, PTerm::Var(j)) => {
                if self.occurs(*j, &a) {
                    return false;
                }
                self.bind(*j, a);
                true
            }
            (PTerm::App(f, xs), PTerm::App(g, ys)) => {
                f == g
                    && xs.len() == ys.len()
                    && xs.iter().zip(ys.iter()).all(|(x, y)| self.unify(x, y))
            }
        }
    }

    /// Unifies argument lists; on failure the bindings made are undone.
    pub fn unify_args(&mut self, xs: &[PTerm], ys: &[PTerm]) -> bool {
        let mark = self.mark();
        if xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| self.unify(x, y)) {
            true
        } else {
            self.undo(mark);
            false
        }
    }

    pub fn equal(&self, a: &PTerm, b: &PTerm) -> bool {
        match (self.deref(a), self.deref(b)) {
            (PTerm::Var(i), PTerm::Var(j)) => i == j,
            (PTerm::App(f, xs), PTerm::App(g, ys)) => {
                f == g
                    && xs.len() == ys.len()
                    && xs.iter().zip(ys.iter()).all(|(x, y)| self.equal(x, y))
            }
            _ => false,
        }
    }

    pub fn equal_lits(&self, a: &PLit, b: &PLit) -> bool {
        a.positive == b.positive
            && a.pred == b.pred
            && a.args
                .iter()
                .zip(b.args.iter())
                .all(|(x, y)| self.equal(x, y))
    }

    pub fn resolve(&self, t: &PTerm) -> PTerm {
        match self.deref(t) {
            PTerm::Var(i) => PTerm::Var(*i),
            PTerm::App(s, args) => PTerm::App(*s, args.iter().map(|a| self.resolve(a)).collect()),
        }
    }

    pub fn resolve_lit(&self, l: &PLit) -> PLit {
        PLit {
            positive: l.positive,
            pred: l.pred,
            args: l.args.iter().map(|a| self.resolve(a)).collect(),
        }
    }
}
