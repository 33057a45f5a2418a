//! Shared generators and brute-force oracles for the integration suites.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use tabipol_core::logic::{Atom, Formula, Literal, Term};
use tabipol_core::tableau::{NodeId, Side};
use tabipol_core::{Clause, Tableau};

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// Interpretation over a finite domain of constant names: the set of true
/// ground atoms. Terms are read as themselves (Herbrand style).
pub struct Interpretation<'a> {
    pub domain: &'a [String],
    pub true_atoms: &'a BTreeSet<Atom>,
}

impl Interpretation<'_> {
    pub fn eval(&self, f: &Formula) -> bool {
        self.eval_in(f, &mut BTreeMap::new())
    }

    fn ground(&self, a: &Atom, env: &BTreeMap<String, String>) -> Atom {
        a.map_args(|t| match t.as_var().and_then(|v| env.get(v)) {
            Some(c) => Term::constant(c.clone()),
            None => t.clone(),
        })
    }

    fn eval_in(&self, f: &Formula, env: &mut BTreeMap<String, String>) -> bool {
        match f {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(a) => self.true_atoms.contains(&self.ground(a, env)),
            Formula::Not(g) => !self.eval_in(g, env),
            Formula::And(gs) => gs.iter().all(|g| self.eval_in(g, env)),
            Formula::Or(gs) => gs.iter().any(|g| self.eval_in(g, env)),
            Formula::Forall(v, g) => self.for_all(v, g, env),
            Formula::Exists(v, g) => !self.for_all(v, &Formula::not((**g).clone()), env),
            Formula::ForallRel { .. } | Formula::ExistsRel { .. } => {
                self.eval_in(&f.expand_relativized(), env)
            }
        }
    }

    fn for_all(&self, v: &str, g: &Formula, env: &mut BTreeMap<String, String>) -> bool {
        let saved = env.get(v).cloned();
        let mut ok = true;
        for d in self.domain {
            env.insert(v.to_string(), d.clone());
            if !self.eval_in(g, env) {
                ok = false;
                break;
            }
        }
        match saved {
            Some(s) => env.insert(v.to_string(), s),
            None => env.remove(v),
        };
        ok
    }
}

/// All ground atoms over `preds` (name, arity) and `domain`.
pub fn ground_atoms(preds: &[(&str, usize)], domain: &[String]) -> Vec<Atom> {
    let mut out = Vec::new();
    for (p, n) in preds {
        let mut tuples: Vec<Vec<Term>> = vec![Vec::new()];
        for _ in 0..*n {
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    domain.iter().map(move |d| {
                        let mut t = t.clone();
                        t.push(Term::constant(d.clone()));
                        t
                    })
                })
                .collect();
        }
        out.extend(tuples.into_iter().map(|args| Atom::new(*p, args)));
    }
    out
}

/// `premise ⊨ conclusion` over every interpretation of `atoms` on `domain`.
pub fn entails_by_enumeration(
    premise: &Formula,
    conclusion: &Formula,
    atoms: &[Atom],
    domain: &[String],
) -> bool {
    assert!(atoms.len() <= 20, "too many atoms to enumerate");
    (0u32..1 << atoms.len()).all(|bits| {
        let true_atoms: BTreeSet<Atom> = atoms
            .iter()
            .enumerate()
            .filter(|(i, _)| bits >> i & 1 == 1)
            .map(|(_, a)| a.clone())
            .collect();
        let m = Interpretation {
            domain,
            true_atoms: &true_atoms,
        };
        !m.eval(premise) || m.eval(conclusion)
    })
}

pub fn prop_atom(i: usize) -> Atom {
    Atom::new(format!("p{i}"), Vec::new())
}

fn clause_formula(lits: &[Literal]) -> Formula {
    Formula::or(lits.iter().map(Formula::literal))
}

/// Random CNF over `p0..p{n_atoms-1}` with 1..=`max_clauses` clauses of 1..=3 literals.
pub fn random_prop_cnf(rng: &mut TestRng, n_atoms: usize, max_clauses: usize) -> Vec<Vec<Literal>> {
    let n = rng.gen_range(1..=max_clauses);
    (0..n)
        .map(|_| {
            let len = rng.gen_range(1..=3);
            let mut c: Vec<Literal> = Vec::new();
            for _ in 0..len {
                let l = Literal::new(rng.gen_bool(0.5), prop_atom(rng.gen_range(0..n_atoms)));
                if !c.contains(&l) && !c.contains(&l.complement()) {
                    c.push(l);
                }
            }
            c
        })
        .collect()
}

pub fn cnf_formula(cnf: &[Vec<Literal>]) -> Formula {
    Formula::and(cnf.iter().map(|c| clause_formula(c)))
}

/// A propositional pair with `F ⊨ G` confirmed by truth table. `G` is
/// either a weakening of clauses of `F` or an independent random CNF that
/// happens to follow.
pub fn random_entailing_prop_pair(rng: &mut TestRng) -> (Formula, Formula) {
    let n_atoms = rng.gen_range(2..=8);
    let atoms: Vec<Atom> = (0..n_atoms).map(prop_atom).collect();
    loop {
        let f = random_prop_cnf(rng, n_atoms, 10);
        let g: Vec<Vec<Literal>> = if rng.gen_bool(0.6) {
            let k = rng.gen_range(1..=f.len().min(10));
            let mut picked: Vec<Vec<Literal>> = f.choose_multiple(rng, k).cloned().collect();
            for c in &mut picked {
                if rng.gen_bool(0.5) {
                    let l = Literal::new(rng.gen_bool(0.5), prop_atom(rng.gen_range(0..n_atoms)));
                    if !c.contains(&l.complement()) && !c.contains(&l) {
                        c.push(l);
                    }
                }
            }
            picked
        } else {
            random_prop_cnf(rng, n_atoms, 10)
        };
        let (ff, gf) = (cnf_formula(&f), cnf_formula(&g));
        if entails_by_enumeration(&ff, &gf, &atoms, &[]) {
            return (ff, gf);
        }
    }
}

pub const HORN_PREDS: [(&str, usize); 3] = [("p", 1), ("q", 1), ("r", 2)];

fn horn_term(rng: &mut TestRng) -> Term {
    match rng.gen_range(0..4) {
        0 => Term::constant("a"),
        1 => Term::constant("b"),
        2 => Term::var("X"),
        _ => Term::var("Y"),
    }
}

fn horn_atom(rng: &mut TestRng) -> Atom {
    let (p, n) = HORN_PREDS[rng.gen_range(0..HORN_PREDS.len())];
    Atom::new(p, (0..n).map(|_| horn_term(rng)).collect())
}

fn ground_horn_atom(rng: &mut TestRng, domain: &[String]) -> Atom {
    let (p, n) = HORN_PREDS[rng.gen_range(0..HORN_PREDS.len())];
    Atom::new(
        p,
        (0..n)
            .map(|_| Term::constant(domain.choose(rng).unwrap().clone()))
            .collect(),
    )
}

/// Universal closure of a conjunction of up to six Horn clauses over
/// `p/1, q/1, r/2` and constants `a, b`; at least one clause is a fact.
pub fn random_horn_sentence(rng: &mut TestRng) -> Formula {
    let n = rng.gen_range(1..=6);
    let mut clauses = Vec::new();
    for i in 0..n {
        let negs = if i == 0 { 0 } else { rng.gen_range(0..=2) };
        let mut lits: Vec<Formula> = (0..negs)
            .map(|_| Formula::not(Formula::Atom(horn_atom(rng))))
            .collect();
        if i == 0 || rng.gen_bool(0.8) {
            lits.push(Formula::Atom(horn_atom(rng)));
        }
        clauses.push(Formula::or(lits));
    }
    Formula::and(clauses).universal_closure()
}

/// A Horn instance `(F, G)` with `F ⊨ G` confirmed by enumerating the
/// Herbrand interpretations over `{a, b}` (plus one witness element when `G`
/// is universal, standing for its Skolem constant).
pub fn random_horn_instance(rng: &mut TestRng) -> (Formula, Formula) {
    let base: Vec<String> = vec!["a".into(), "b".into()];
    loop {
        let f = random_horn_sentence(rng);
        let universal = rng.gen_bool(0.3);
        let g = if universal {
            let body = Formula::or([
                Formula::not(Formula::atom("p", vec![Term::var("Z")])),
                Formula::Atom(Atom::new(
                    ["p", "q"][rng.gen_range(0..2)],
                    vec![Term::var("Z")],
                )),
            ]);
            if rng.gen_bool(0.5) {
                Formula::forall(["Z".to_string()], body)
            } else {
                Formula::forall(
                    ["Z".to_string()],
                    Formula::Atom(Atom::new("q", vec![Term::var("Z")])),
                )
            }
        } else {
            let k = rng.gen_range(1..=2);
            Formula::or((0..k).map(|_| {
                let a = Formula::Atom(ground_horn_atom(rng, &base));
                if rng.gen_bool(0.8) {
                    a
                } else {
                    Formula::not(a)
                }
            }))
        };
        let mut domain = base.clone();
        if universal {
            domain.push("w".into());
        }
        let atoms = ground_atoms(&HORN_PREDS, &domain);
        if entails_by_enumeration(&f, &g, &atoms, &domain) {
            return (f, g);
        }
    }
}

/// Literals over a small ground vocabulary.
fn tableau_literal(rng: &mut TestRng) -> Literal {
    let atom = match rng.gen_range(0..6) {
        0 => Atom::new("p", vec![Term::constant("a")]),
        1 => Atom::new("p", vec![Term::constant("b")]),
        2 => Atom::new("q", vec![Term::constant("a")]),
        3 => Atom::new("r", Vec::new()),
        4 => Atom::new("s", vec![Term::constant("a"), Term::constant("b")]),
        _ => Atom::new("t", Vec::new()),
    };
    Literal::new(rng.gen_bool(0.5), atom)
}

/// A random closed ground tableau. Each expansion mixes fresh literals with
/// complements of branch literals; at the depth limit only complements are
/// used, so every branch closes.
pub fn random_closed_tableau(rng: &mut TestRng, max_depth: usize) -> Tableau {
    let mut t = Tableau::new();
    expand(rng, &mut t, Tableau::ROOT, 0, max_depth);
    t
}

fn expand(rng: &mut TestRng, t: &mut Tableau, n: NodeId, depth: usize, max_depth: usize) {
    let branch: Vec<Literal> = std::iter::once(n)
        .chain(t.ancestors(n))
        .filter_map(|a| t.lit(a).cloned())
        .collect();
    let mut clause: Vec<Literal> = Vec::new();
    let push = |c: &mut Vec<Literal>, l: Literal| {
        if !c.contains(&l) && !c.contains(&l.complement()) {
            c.push(l);
        }
    };
    let closing_only = !branch.is_empty() && (depth >= max_depth || rng.gen_bool(0.25));
    if closing_only {
        for _ in 0..rng.gen_range(1..=2) {
            push(&mut clause, branch.choose(rng).unwrap().complement());
        }
    } else {
        for _ in 0..rng.gen_range(1..=3) {
            push(&mut clause, tableau_literal(rng));
        }
        if !branch.is_empty() && rng.gen_bool(0.6) {
            push(&mut clause, branch.choose(rng).unwrap().complement());
        }
    }
    clause.shuffle(rng);
    let side = if rng.gen_bool(0.5) {
        Side::Red
    } else {
        Side::Blue
    };
    let kids: Vec<NodeId> = clause
        .into_iter()
        .map(|l| t.add_child(n, l, Some(side), None))
        .collect();
    for c in kids {
        if !t.is_closed_node(c) {
            expand(rng, t, c, depth + 1, max_depth);
        }
    }
}

/// Clauses of a tableau as input clauses, by side.
pub fn tableau_clauses(t: &Tableau) -> (Vec<Clause>, Vec<Clause>) {
    let mut red = Vec::new();
    let mut blue = Vec::new();
    for (_, side, c) in t.clauses() {
        match side {
            Some(Side::Blue) => blue.push(c),
            _ => red.push(c),
        }
    }
    (red, blue)
}
