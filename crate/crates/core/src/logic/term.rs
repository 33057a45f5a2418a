use std::collections::BTreeSet;

/// A first-order term. Constants are zero-ary applications.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Term {
        Term::App(name.into(), Vec::new())
    }

    pub fn app(name: impl Into<String>, args: Vec<Term>) -> Term {
        Term::App(name.into(), args)
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn as_var(&self) -> Option<&str> {
        match self {
            Term::Var(v) => Some(v),
            Term::App(..) => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, Term::App(_, args) if args.is_empty())
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    /// Principal function symbol, `None` for variables.
    pub fn functor(&self) -> Option<&str> {
        match self {
            Term::Var(_) => None,
            Term::App(f, _) => Some(f),
        }
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Term::Var(_) => &[],
            Term::App(_, args) => args,
        }
    }

    /// Number of symbol occurrences.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    /// Nesting depth; variables and constants have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => args.iter().map(|a| a.depth() + 1).max().unwrap_or(0),
        }
    }

    pub fn vars_into(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::App(_, args) => args.iter().for_each(|a| a.vars_into(out)),
        }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.vars_into(&mut out);
        out
    }

    pub fn has_var(&self, name: &str) -> bool {
        match self {
            Term::Var(v) => v == name,
            Term::App(_, args) => args.iter().any(|a| a.has_var(name)),
        }
    }

    /// Function symbols (constants included) occurring in the term.
    pub fn funs_into(&self, out: &mut BTreeSet<String>) {
        if let Term::App(f, args) = self {
            out.insert(f.clone());
            args.iter().for_each(|a| a.funs_into(out));
        }
    }

    pub fn consts_into(&self, out: &mut BTreeSet<String>) {
        if let Term::App(f, args) = self {
            if args.is_empty() {
                out.insert(f.clone());
            }
            args.iter().for_each(|a| a.consts_into(out));
        }
    }

    /// Every subterm, the term itself included, in pre-order.
    pub fn subterms(&self) -> Vec<&Term> {
        let mut out = vec![self];
        let mut i = 0;
        while i < out.len() {
            let t = out[i];
            out.extend(t.args().iter());
            i += 1;
        }
        out
    }

    pub fn contains(&self, other: &Term) -> bool {
        self == other || self.args().iter().any(|a| a.contains(other))
    }

    pub fn is_strict_subterm_of(&self, other: &Term) -> bool {
        other.args().iter().any(|a| a.contains(self))
    }

    /// Applies `f` to every maximal subterm for which it returns `Some`.
    pub fn replace_top_down(&self, f: &mut impl FnMut(&Term) -> Option<Term>) -> Term {
        if let Some(t) = f(self) {
            return t;
        }
        match self {
            Term::Var(_) => self.clone(),
            Term::App(name, args) => Term::App(
                name.clone(),
                args.iter().map(|a| a.replace_top_down(f)).collect(),
            ),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn flip(self) -> Polarity {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Polarity::Positive => '+',
            Polarity::Negative => '-',
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub pred: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(pred: impl Into<String>, args: Vec<Term>) -> Atom {
        Atom {
            pred: pred.into(),
            args,
        }
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }

    pub fn vars_into(&self, out: &mut BTreeSet<String>) {
        self.args.iter().for_each(|a| a.vars_into(out));
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.vars_into(&mut out);
        out
    }

    /// Relational atoms have only variables and constants as arguments.
    pub fn is_relational(&self) -> bool {
        self.args.iter().all(|t| t.is_var() || t.is_constant())
    }

    pub fn map_args(&self, f: impl FnMut(&Term) -> Term) -> Atom {
        Atom {
            pred: self.pred.clone(),
            args: self.args.iter().map(f).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub positive: bool,
    pub atom: Atom,
}

impl Literal {
    pub fn new(positive: bool, atom: Atom) -> Literal {
        Literal { positive, atom }
    }

    pub fn pos(atom: Atom) -> Literal {
        Literal::new(true, atom)
    }

    pub fn neg(atom: Atom) -> Literal {
        Literal::new(false, atom)
    }

    pub fn complement(&self) -> Literal {
        Literal {
            positive: !self.positive,
            atom: self.atom.clone(),
        }
    }

    pub fn is_complement_of(&self, other: &Literal) -> bool {
        self.positive != other.positive && self.atom == other.atom
    }

    pub fn polarity(&self) -> Polarity {
        if self.positive {
            Polarity::Positive
        } else {
            Polarity::Negative
        }
    }

    pub fn pred(&self) -> &str {
        &self.atom.pred
    }

    pub fn is_ground(&self) -> bool {
        self.atom.is_ground()
    }

    pub fn vars_into(&self, out: &mut BTreeSet<String>) {
        self.atom.vars_into(out);
    }

    pub fn map_args(&self, f: impl FnMut(&Term) -> Term) -> Literal {
        Literal {
            positive: self.positive,
            atom: self.atom.map_args(f),
        }
    }
}

/// A disjunction of literals. Literal order is significant for tableau children.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Clause {
    pub literals: Vec<Literal>,
}

impl Clause {
    pub fn new(literals: Vec<Literal>) -> Clause {
        Clause { literals }
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.literals.iter().for_each(|l| l.vars_into(&mut out));
        out
    }

    pub fn is_ground(&self) -> bool {
        self.literals.iter().all(Literal::is_ground)
    }

    pub fn positive_count(&self) -> usize {
        self.literals.iter().filter(|l| l.positive).count()
    }

    pub fn is_horn(&self) -> bool {
        self.positive_count() <= 1
    }

    pub fn is_negative(&self) -> bool {
        self.positive_count() == 0
    }

    pub fn funs_into(&self, out: &mut BTreeSet<String>) {
        for l in &self.literals {
            l.atom.args.iter().for_each(|a| a.funs_into(out));
        }
    }

    /// Renames variables to `X1, X2, ...` in order of first occurrence.
    pub fn normalize_vars(&self) -> Clause {
        let mut names: Vec<String> = Vec::new();
        fn collect(t: &Term, names: &mut Vec<String>) {
            match t {
                Term::Var(v) => {
                    if !names.contains(v) {
                        names.push(v.clone());
                    }
                }
                Term::App(_, args) => args.iter().for_each(|a| collect(a, names)),
            }
        }
        for l in &self.literals {
            l.atom.args.iter().for_each(|a| collect(a, &mut names));
        }
        let rename = |t: &Term| {
            t.replace_top_down(&mut |s| match s {
                Term::Var(v) => {
                    let i = names.iter().position(|n| n == v).unwrap();
                    Some(Term::Var(format!("X{}", i + 1)))
                }
                _ => None,
            })
        };
        Clause::new(self.literals.iter().map(|l| l.map_args(rename)).collect())
    }
}
