use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use crate::tableau::Tableau;

use super::engine::{shift_lit, Bindings, PLit, PTerm, Sym, Symbols};
use super::{with_big_stack, ClauseSet, ExhaustReason, Exhausted, Meter, ProofBudget};

/// Which input clauses may label the root's children.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum StartPolicy {
    /// Clauses without positive literals.
    #[default]
    Negative,
    /// Clauses without negative literals.
    Positive,
    All,
}

struct Template {
    lits: Vec<PLit>,
    nvars: u32,
}

struct PathCell {
    lit: PLit,
    len: usize,
    next: Path,
}

type Path = Option<Rc<PathCell>>;

enum Goal {
    Open {
        lit: PLit,
        node: usize,
        path: Path,
    },
    /// Reached once the subproof of the goal owning `frame` is complete.
    Done {
        frame: u64,
        mark: usize,
        vars: u32,
    },
}

struct GoalCell {
    goal: Goal,
    next: Goals,
}

enum Step {
    Proved,
    Failed,
    /// The remaining goals failed after a subproof that bound no outer
    /// variable; alternatives up to the owning frame cannot help.
    Cut(u64),
}

type Goals = Option<Rc<GoalCell>>;

struct SearchNode {
    lit: PLit,
    parent: usize,
    clause: usize,
}

struct Search<'a> {
    set: &'a ClauseSet,
    syms: Symbols,
    templates: Vec<Template>,
    /// Clause literals by (predicate, polarity), in clause order.
    by_pred: HashMap<(Sym, bool), Vec<(usize, usize)>>,
    bind: Bindings,
    nodes: Vec<SearchNode>,
    meter: Meter,
    limit: usize,
    hit_limit: bool,
    frames: u64,
}

fn path_len(p: &Path) -> usize {
    p.as_ref().map_or(0, |c| c.len)
}

/// Searches for a closed connection tableau by iterative deepening on the
/// length of the path to an extended node.
///
/// The result may contain free (rigid) variables, named `_V0`, `_V1`, ...
/// Nodes inherit side and metadata of the input clause they come from.
pub fn prove_connection(
    set: &ClauseSet,
    policy: StartPolicy,
    budget: &ProofBudget,
) -> Result<Tableau, Exhausted> {
    if set.clauses.iter().any(|c| c.clause.is_empty()) {
        return Ok(Tableau::new());
    }
    with_big_stack(|| Search::new(set, budget).run(policy, budget.max_depth))
}

impl<'a> Search<'a> {
    fn new(set: &'a ClauseSet, budget: &ProofBudget) -> Search<'a> {
        let mut syms = Symbols::default();
        let mut templates = Vec::new();
        for c in &set.clauses {
            let mut vars = Vec::new();
            let lits = c
                .clause
                .literals
                .iter()
                .map(|l| syms.literal(l, &mut vars))
                .collect();
            templates.push(Template {
                lits,
                nvars: vars.len() as u32,
            });
        }
        let mut order: Vec<usize> = (0..templates.len()).collect();
        order.sort_by_key(|&i| (templates[i].lits.len(), i));
        let mut by_pred: HashMap<(Sym, bool), Vec<(usize, usize)>> = HashMap::new();
        for &ci in &order {
            for (li, l) in templates[ci].lits.iter().enumerate() {
                by_pred
                    .entry((l.pred, l.positive))
                    .or_default()
                    .push((ci, li));
            }
        }
        Search {
            set,
            syms,
            templates,
            by_pred,
            bind: Bindings::default(),
            nodes: Vec::new(),
            meter: Meter::new(budget),
            limit: 0,
            hit_limit: false,
            frames: 0,
        }
    }

    fn run(mut self, policy: StartPolicy, max_depth: usize) -> Result<Tableau, Exhausted> {
        let mut starts: Vec<usize> = (0..self.templates.len())
            .filter(|&i| {
                let t = &self.templates[i];
                match policy {
                    StartPolicy::Negative => t.lits.iter().all(|l| !l.positive),
                    StartPolicy::Positive => t.lits.iter().all(|l| l.positive),
                    StartPolicy::All => true,
                }
            })
            .collect();
        starts.sort_by_key(|&i| (self.templates[i].lits.len(), i));
        for limit in 1..=max_depth.max(1) {
            self.limit = limit;
            self.hit_limit = false;
            for &s in &starts {
                match self.try_start(s) {
                    Ok(Step::Proved) => return Ok(self.build()),
                    Ok(_) => {}
                    Err(r) => return Err(self.meter.exhausted(r)),
                }
            }
            if !self.hit_limit {
                return Err(self.meter.exhausted(ExhaustReason::Saturated));
            }
        }
        Err(self.meter.exhausted(ExhaustReason::DepthLimit))
    }

    fn try_start(&mut self, ci: usize) -> Result<Step, ExhaustReason> {
        self.bind = Bindings::default();
        self.nodes.clear();
        self.nodes.push(SearchNode {
            lit: PLit {
                positive: true,
                pred: Sym::MAX,
                args: Rc::from(Vec::new()),
            },
            parent: usize::MAX,
            clause: usize::MAX,
        });
        let off = self.bind.alloc(self.templates[ci].nvars);
        let lits: Vec<PLit> = self.templates[ci]
            .lits
            .iter()
            .map(|l| shift_lit(l, off))
            .collect();
        let mut goals: Goals = None;
        for lit in &lits {
            self.nodes.push(SearchNode {
                lit: lit.clone(),
                parent: 0,
                clause: ci,
            });
        }
        for (k, lit) in lits.into_iter().enumerate().rev() {
            goals = Some(Rc::new(GoalCell {
                goal: Goal::Open {
                    lit,
                    node: 1 + k,
                    path: None,
                },
                next: goals,
            }));
        }
        self.solve(&goals)
    }

    fn solve(&mut self, goals: &Goals) -> Result<Step, ExhaustReason> {
        let Some(cell) = goals else {
            return Ok(Step::Proved);
        };
        let (lit, node, path) = match &cell.goal {
            Goal::Done { frame, mark, vars } => {
                let step = self.solve(&cell.next)?;
                return Ok(match step {
                    Step::Failed if !self.bind.bound_since(*mark, *vars) => Step::Cut(*frame),
                    other => other,
                });
            }
            Goal::Open { lit, node, path } => (lit, *node, path),
        };
        self.meter.tick()?;
        let mut p = path;
        while let Some(c) = p {
            if self.bind.equal_lits(lit, &c.lit) {
                return Ok(Step::Failed);
            }
            p = &c.next;
        }
        // Reductions, nearest path literal first.
        let mut p = path;
        while let Some(c) = p {
            if c.lit.positive != lit.positive && c.lit.pred == lit.pred {
                let mark = self.bind.mark();
                if self.bind.unify_args(&lit.args, &c.lit.args) {
                    let bound_nothing = self.bind.mark() == mark;
                    match self.solve(&cell.next)? {
                        Step::Failed => {}
                        other => return Ok(other),
                    }
                    self.bind.undo(mark);
                    if bound_nothing {
                        // Any other alternative only adds constraints.
                        return Ok(Step::Failed);
                    }
                }
            }
            p = &c.next;
        }
        // Extensions.
        let Some(cands) = self.by_pred.get(&(lit.pred, !lit.positive)) else {
            return Ok(Step::Failed);
        };
        let depth = path_len(path);
        if depth >= self.limit {
            self.hit_limit = true;
            return Ok(Step::Failed);
        }
        let cands = cands.clone();
        let new_path: Path = Some(Rc::new(PathCell {
            lit: lit.clone(),
            len: depth + 1,
            next: path.clone(),
        }));
        self.frames += 1;
        let frame = self.frames;
        let outer_vars = self.bind.var_count();
        let outer_mark = self.bind.mark();
        let done: Goals = Some(Rc::new(GoalCell {
            goal: Goal::Done {
                frame,
                mark: outer_mark,
                vars: outer_vars,
            },
            next: cell.next.clone(),
        }));
        for (ci, li) in cands {
            self.meter.tick()?;
            let vars_before = self.bind.var_count();
            let mark = self.bind.mark();
            let off = self.bind.alloc(self.templates[ci].nvars);
            let lits: Vec<PLit> = self.templates[ci]
                .lits
                .iter()
                .map(|l| shift_lit(l, off))
                .collect();
            if self.bind.unify_args(&lit.args, &lits[li].args)
                && !self.irregular(&lits, li, &new_path)
            {
                let base = self.nodes.len();
                for l in &lits {
                    self.nodes.push(SearchNode {
                        lit: l.clone(),
                        parent: node,
                        clause: ci,
                    });
                }
                let mut rest = done.clone();
                for (k, l) in lits.into_iter().enumerate().rev() {
                    if k != li {
                        rest = Some(Rc::new(GoalCell {
                            goal: Goal::Open {
                                lit: l,
                                node: base + k,
                                path: new_path.clone(),
                            },
                            next: rest,
                        }));
                    }
                }
                let step = self.solve(&rest)?;
                if matches!(step, Step::Proved) {
                    return Ok(Step::Proved);
                }
                self.nodes.truncate(base);
                self.bind.undo(mark);
                self.bind.release(vars_before);
                match step {
                    Step::Cut(f) if f == frame => return Ok(Step::Failed),
                    Step::Cut(f) => return Ok(Step::Cut(f)),
                    _ => {}
                }
            } else {
                self.bind.undo(mark);
                self.bind.release(vars_before);
            }
        }
        Ok(Step::Failed)
    }

    /// A new sibling literal that repeats a path literal can never be solved.
    fn irregular(&self, lits: &[PLit], matched: usize, path: &Path) -> bool {
        lits.iter().enumerate().any(|(k, l)| {
            if k == matched {
                return false;
            }
            let mut p = path;
            while let Some(cell) = p {
                if self.bind.equal_lits(l, &cell.lit) {
                    return true;
                }
                p = &cell.next;
            }
            false
        })
    }

    fn build(&self) -> Tableau {
        let mut t = Tableau::new();
        let mut ids = vec![Tableau::ROOT; self.nodes.len()];
        let mut rename: BTreeMap<u32, u32> = BTreeMap::new();
        for (i, n) in self.nodes.iter().enumerate().skip(1) {
            let lit = self.bind.resolve_lit(&n.lit);
            let lit = PLit {
                positive: lit.positive,
                pred: lit.pred,
                args: lit.args.iter().map(|a| renumber(a, &mut rename)).collect(),
            };
            let input = &self.set.clauses[n.clause];
            ids[i] = t.add_child(
                ids[n.parent],
                self.syms.to_literal(&lit),
                input.side,
                input.meta.clone(),
            );
        }
        t.assign_targets();
        t
    }
}

fn renumber(t: &PTerm, rename: &mut BTreeMap<u32, u32>) -> PTerm {
    match t {
        PTerm::Var(v) => {
            let next = rename.len() as u32;
            PTerm::Var(*rename.entry(*v).or_insert(next))
        }
        PTerm::App(s, args) => PTerm::App(*s, args.iter().map(|a| renumber(a, rename)).collect()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::Clause;
    use crate::syntax::parse_literal;
    use crate::tableau::{check_tightly_connected, is_closed};

    fn set(clauses: &[&[&str]]) -> ClauseSet {
        ClauseSet::from_clauses(
            clauses
                .iter()
                .map(|c| Clause::new(c.iter().map(|l| parse_literal(l).unwrap()).collect())),
        )
    }

    #[test]
    fn complementary_units() {
        let t = prove_connection(
            &set(&[&["p"], &["~p"]]),
            StartPolicy::Negative,
            &ProofBudget::default(),
        )
        .unwrap();
        assert_eq!(t.len(), 3);
        assert!(is_closed(&t));
    }

    #[test]
    fn satisfiable_is_saturated() {
        let e = prove_connection(
            &set(&[&["p"]]),
            StartPolicy::Negative,
            &ProofBudget::default(),
        )
        .unwrap_err();
        assert_eq!(e.reason, ExhaustReason::Saturated);
        let e = prove_connection(
            &set(&[&["p", "q"], &["~p"]]),
            StartPolicy::Negative,
            &ProofBudget::default(),
        )
        .unwrap_err();
        assert_eq!(e.reason, ExhaustReason::Saturated);
    }

    #[test]
    fn first_order_chain() {
        let s = set(&[
            &["p(a)"],
            &["~p(X)", "q(f(X))"],
            &["~q(Y)", "r(Y)"],
            &["~r(f(a))"],
        ]);
        let t = prove_connection(&s, StartPolicy::Negative, &ProofBudget::default()).unwrap();
        assert!(is_closed(&t));
        assert!(check_tightly_connected(&t).ok);
        assert!(t
            .preorder()
            .iter()
            .filter_map(|&n| t.lit(n))
            .all(|l| l.is_ground()));
    }

    #[test]
    fn occurs_check_blocks_unsound_closure() {
        let s = set(&[&["p(X, X)"], &["~p(Y, f(Y))"]]);
        let e = prove_connection(&s, StartPolicy::Negative, &ProofBudget::default()).unwrap_err();
        assert_eq!(e.reason, ExhaustReason::Saturated);
    }

    #[test]
    fn needs_reduction_step() {
        // p | q, ~p | q, p | ~q, ~p | ~q
        let s = set(&[&["p", "q"], &["~p", "q"], &["p", "~q"], &["~p", "~q"]]);
        let t = prove_connection(&s, StartPolicy::Negative, &ProofBudget::default()).unwrap();
        assert!(is_closed(&t));
    }

    #[test]
    fn leftover_rigid_variables_are_renamed() {
        let s = set(&[&["p(X)"], &["~p(Y)"]]);
        let t = prove_connection(&s, StartPolicy::Negative, &ProofBudget::default()).unwrap();
        assert_eq!(t.lit(1).unwrap().to_string(), "~p(_V0)");
    }

    #[test]
    fn inference_budget_is_enforced() {
        let s = set(&[&["~p(a)"], &["p(f(X))", "~p(X)"], &["p(X)", "~p(f(X))"]]);
        let b = ProofBudget {
            max_depth: 50,
            max_inferences: 500,
            timeout_ms: 10_000,
        };
        let e = prove_connection(&s, StartPolicy::Negative, &b).unwrap_err();
        assert!(matches!(
            e.reason,
            ExhaustReason::InferenceLimit | ExhaustReason::DepthLimit
        ));
    }
}
