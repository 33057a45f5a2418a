use std::collections::{BTreeSet, HashSet};

use crate::logic::{match_atom, Atom, Clause, FreshNames, Literal, Substitution, Term};
use crate::tableau::{NodeId, Tableau};

use super::{with_big_stack, ClauseSet, ExhaustReason, Exhausted, Meter, ProofBudget};

/// Builds a closed positive hyper tableau.
///
/// A branch is extended with the first applicable ground clause instance:
/// every negative literal must match an atom on the branch, no positive
/// literal may already be on it, and all terms stay within the current term
/// depth bound. Variables occurring only in positive literals range over the
/// Herbrand universe of the input (plus one fresh constant if it has none).
/// Negative children are closed at once. When some branch saturates, the
/// search restarts with a larger depth bound, up to `budget.max_depth`.
pub fn prove_hyper(set: &ClauseSet, budget: &ProofBudget) -> Result<Tableau, Exhausted> {
    if set.clauses.iter().any(|c| c.clause.is_empty()) {
        return Ok(Tableau::new());
    }
    with_big_stack(|| Hyper::new(set, budget).run(budget.max_depth))
}

struct Hyper<'a> {
    set: &'a ClauseSet,
    order: Vec<usize>,
    constants: Vec<Term>,
    functions: Vec<(String, usize)>,
    universe: Vec<Vec<Term>>,
    meter: Meter,
    bound: usize,
    pruned: bool,
    tab: Tableau,
    branch: Vec<(Atom, NodeId)>,
    on_branch: HashSet<Atom>,
}

struct Instance {
    clause: usize,
    literals: Vec<Literal>,
    /// For negative literals, the branch node holding the complement.
    targets: Vec<Option<NodeId>>,
}

impl<'a> Hyper<'a> {
    fn new(set: &'a ClauseSet, budget: &ProofBudget) -> Hyper<'a> {
        let mut order: Vec<usize> = (0..set.clauses.len()).collect();
        order.sort_by_key(|&i| {
            let c = &set.clauses[i].clause;
            let pos = c.positive_count();
            (pos != 0, pos > 1, c.len(), i)
        });
        let mut consts = BTreeSet::new();
        let mut funs = BTreeSet::new();
        for c in &set.clauses {
            for l in &c.clause.literals {
                for a in &l.atom.args {
                    collect_symbols(a, &mut consts, &mut funs);
                }
            }
        }
        if consts.is_empty() {
            let mut names =
                FreshNames::avoiding(funs.iter().map(|(f, _): &(String, usize)| f.clone()));
            consts.insert(names.fresh_like("k"));
        }
        Hyper {
            set,
            order,
            constants: consts.into_iter().map(Term::constant).collect(),
            functions: funs.into_iter().collect(),
            universe: Vec::new(),
            meter: Meter::new(budget),
            bound: 0,
            pruned: false,
            tab: Tableau::new(),
            branch: Vec::new(),
            on_branch: HashSet::new(),
        }
    }

    fn run(mut self, max_depth: usize) -> Result<Tableau, Exhausted> {
        let max_ground = self
            .set
            .clauses
            .iter()
            .flat_map(|c| c.clause.literals.iter())
            .flat_map(|l| l.atom.args.iter())
            .filter(|t| t.is_ground())
            .map(Term::depth)
            .max()
            .unwrap_or(0);
        for bound in max_ground..=max_ground.max(max_depth) {
            self.bound = bound;
            self.pruned = false;
            self.tab = Tableau::new();
            self.branch.clear();
            self.on_branch.clear();
            match self.expand(Tableau::ROOT) {
                Ok(true) => {
                    let mut t = std::mem::take(&mut self.tab);
                    t.assign_targets();
                    return Ok(t);
                }
                Ok(false) if !self.pruned => {
                    return Err(self.meter.exhausted(ExhaustReason::Saturated))
                }
                Ok(false) => {}
                Err(r) => return Err(self.meter.exhausted(r)),
            }
        }
        Err(self.meter.exhausted(ExhaustReason::DepthLimit))
    }

    /// Extends the branch ending in `leaf` until closed; `false` if some
    /// branch below saturates open.
    fn expand(&mut self, leaf: NodeId) -> Result<bool, ExhaustReason> {
        let Some(inst) = self.find_instance()? else {
            return Ok(false);
        };
        let set = self.set;
        let input = &set.clauses[inst.clause];
        let mut kids = Vec::new();
        for (lit, tgt) in inst.literals.into_iter().zip(inst.targets) {
            let positive = lit.positive;
            let atom = lit.atom.clone();
            let id = self
                .tab
                .add_child(leaf, lit, input.side, input.meta.clone());
            self.tab.node_mut(id).tgt = tgt;
            if positive {
                kids.push((id, atom));
            }
        }
        for (id, atom) in kids {
            let fresh = self.on_branch.insert(atom.clone());
            self.branch.push((atom.clone(), id));
            let closed = self.expand(id)?;
            self.branch.pop();
            if fresh {
                self.on_branch.remove(&atom);
            }
            if !closed {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn find_instance(&mut self) -> Result<Option<Instance>, ExhaustReason> {
        for k in 0..self.order.len() {
            let ci = self.order[k];
            let set = self.set;
            let clause = &set.clauses[ci].clause;
            let negs: Vec<usize> = (0..clause.len())
                .filter(|&i| !clause.literals[i].positive)
                .collect();
            let mut targets = vec![None; clause.len()];
            if let Some(inst) =
                self.match_negatives(ci, clause, &negs, 0, &Substitution::new(), &mut targets)?
            {
                return Ok(Some(inst));
            }
        }
        Ok(None)
    }

    fn match_negatives(
        &mut self,
        ci: usize,
        clause: &Clause,
        negs: &[usize],
        i: usize,
        subst: &Substitution,
        targets: &mut Vec<Option<NodeId>>,
    ) -> Result<Option<Instance>, ExhaustReason> {
        if i == negs.len() {
            return self.complete(ci, clause, subst, targets);
        }
        let lit = &clause.literals[negs[i]];
        for b in 0..self.branch.len() {
            if self.branch[b].0.pred != lit.atom.pred {
                continue;
            }
            self.meter.tick()?;
            let mut s = subst.clone();
            if match_atom(&lit.atom, &self.branch[b].0, &mut s) {
                targets[negs[i]] = Some(self.branch[b].1);
                if let Some(inst) = self.match_negatives(ci, clause, negs, i + 1, &s, targets)? {
                    return Ok(Some(inst));
                }
            }
        }
        Ok(None)
    }

    /// Instantiates the remaining variables over the bounded universe.
    fn complete(
        &mut self,
        ci: usize,
        clause: &Clause,
        subst: &Substitution,
        targets: &[Option<NodeId>],
    ) -> Result<Option<Instance>, ExhaustReason> {
        let free: Vec<String> = clause
            .vars()
            .into_iter()
            .filter(|v| subst.get(v).is_none())
            .collect();
        let universe = if free.is_empty() {
            Vec::new()
        } else {
            self.universe_upto(self.bound)
        };
        if !free.is_empty() && universe.is_empty() {
            return Ok(None);
        }
        let mut choice = vec![0usize; free.len()];
        loop {
            self.meter.tick()?;
            let mut s = subst.clone();
            for (v, &c) in free.iter().zip(&choice) {
                s.bind(v.clone(), universe[c].clone());
            }
            let literals: Vec<Literal> =
                clause.literals.iter().map(|l| s.apply_literal(l)).collect();
            let too_deep = literals
                .iter()
                .any(|l| l.atom.args.iter().any(|t| t.depth() > self.bound));
            if too_deep {
                self.pruned = true;
            } else if !literals
                .iter()
                .any(|l| l.positive && self.on_branch.contains(&l.atom))
            {
                return Ok(Some(Instance {
                    clause: ci,
                    literals,
                    targets: targets.to_vec(),
                }));
            }
            // Next assignment, odometer style.
            let mut pos = 0;
            loop {
                if pos == choice.len() {
                    return Ok(None);
                }
                choice[pos] += 1;
                if choice[pos] < universe.len() {
                    break;
                }
                choice[pos] = 0;
                pos += 1;
            }
        }
    }

    /// Ground terms of depth at most `d`, shallow ones first.
    fn universe_upto(&mut self, d: usize) -> Vec<Term> {
        if self.universe.is_empty() {
            self.universe.push(self.constants.clone());
        }
        while self.universe.len() <= d {
            let all: Vec<Term> = self.universe.iter().flatten().cloned().collect();
            let prev: HashSet<&Term> = all.iter().collect();
            let mut next = Vec::new();
            for (f, n) in &self.functions {
                for args in tuples(&all, *n) {
                    let t = Term::app(f.clone(), args);
                    if !prev.contains(&t) {
                        next.push(t);
                    }
                }
            }
            let grew = !next.is_empty();
            self.universe.push(next);
            if !grew {
                break;
            }
        }
        self.universe
            .iter()
            .take(d + 1)
            .flatten()
            .cloned()
            .collect()
    }
}

fn tuples(pool: &[Term], n: usize) -> Vec<Vec<Term>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                pool.iter().map(move |t| {
                    let mut p = prefix.clone();
                    p.push(t.clone());
                    p
                })
            })
            .collect();
    }
    out
}

fn collect_symbols(t: &Term, consts: &mut BTreeSet<String>, funs: &mut BTreeSet<(String, usize)>) {
    if let Term::App(f, args) = t {
        if args.is_empty() {
            consts.insert(f.clone());
        } else {
            funs.insert((f.clone(), args.len()));
            args.iter().for_each(|a| collect_symbols(a, consts, funs));
        }
    }
}
