//! Tableau restructurings that preserve closedness and only reuse clauses of
//! the input: removal of uneagerness and of irregularities, leaf-only
//! conversion, contiguity for guard/definer pairs, and the composite
//! conversion into a tableau suitable for access interpolation.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::access::{check_aci, AciContext};
use crate::logic::Literal;
use crate::tableau::{is_closed, is_eager, is_regular, negative_labels, NodeId, Tableau};

/// Upper bound on reachable nodes during leaf-only conversion.
pub const MAX_NODES: usize = 200_000;
/// Upper bound on leaf-only rounds.
pub const MAX_ROUNDS: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransformError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("tableau grew beyond {0} nodes")]
    TooLarge(usize),
    #[error("leaf-only conversion exceeded {0} rounds")]
    RoundLimit(usize),
    #[error("result is not suitable for access interpolation:\n{0}")]
    NotAci(String),
}

/// One step of a conversion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEntry {
    pub procedure: String,
    /// Nodes selected by the step, as ids of the tableau the step started from.
    pub touched: Vec<NodeId>,
    pub nodes_before: usize,
    pub nodes_after: usize,
    /// Termination measure of a leaf-only round.
    pub measure: Option<Vec<u64>>,
    /// The tableau after the step, kept only by [`TransformTrace::with_snapshots`].
    pub snapshot: Option<Tableau>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TransformTrace {
    pub entries: Vec<TraceEntry>,
    keep_snapshots: bool,
}

impl TransformTrace {
    /// A trace that also stores the intermediate tableaux.
    pub fn with_snapshots() -> TransformTrace {
        TransformTrace {
            entries: Vec::new(),
            keep_snapshots: true,
        }
    }

    fn record(
        &mut self,
        procedure: &str,
        touched: Vec<NodeId>,
        before: usize,
        result: &Tableau,
        measure: Option<Vec<u64>>,
    ) {
        self.entries.push(TraceEntry {
            procedure: procedure.to_string(),
            touched,
            nodes_before: before,
            nodes_after: result.len(),
            measure,
            snapshot: self.keep_snapshots.then(|| result.normalized()),
        });
    }

    /// Intermediate tableaux of one procedure's effective steps.
    pub fn snapshots(&self, procedure: &str) -> Vec<&Tableau> {
        self.steps(procedure)
            .into_iter()
            .filter_map(|e| e.snapshot.as_ref())
            .collect()
    }

    /// Entries of one procedure that changed something.
    pub fn steps(&self, procedure: &str) -> Vec<&TraceEntry> {
        self.entries
            .iter()
            .filter(|e| e.procedure == procedure && !e.touched.is_empty())
            .collect()
    }

    /// Measures of the leaf-only rounds, in order.
    pub fn leaf_only_measures(&self) -> Vec<&Vec<u64>> {
        self.entries
            .iter()
            .filter_map(|e| e.measure.as_ref())
            .collect()
    }

    /// Indices of leaf-only rounds whose measure is not below the previous one.
    pub fn measure_increases(&self) -> Vec<usize> {
        let ms = self.leaf_only_measures();
        (1..ms.len()).filter(|&i| ms[i] >= ms[i - 1]).collect()
    }
}

/// Renders a leaf-only measure, with `w` for the terminating ω entry.
pub fn format_measure(m: &[u64]) -> String {
    m.iter()
        .map(|x| {
            if *x == u64::MAX {
                "w".to_string()
            } else {
                x.to_string()
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

impl fmt::Display for TransformTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            write!(
                f,
                "{}: touched {:?}, nodes {} -> {}",
                e.procedure, e.touched, e.nodes_before, e.nodes_after
            )?;
            if let Some(m) = &e.measure {
                write!(f, ", measure [{}]", format_measure(m))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Clauses of a tableau as sorted literal lists.
pub fn clause_set(t: &Tableau) -> BTreeSet<Vec<Literal>> {
    t.clauses()
        .into_iter()
        .map(|(_, _, c)| {
            let mut lits = c.literals;
            lits.sort();
            lits
        })
        .collect()
}

/// Every clause of `after` is a clause of `before`.
pub fn conserves_clauses(before: &Tableau, after: &Tableau) -> bool {
    clause_set(after).is_subset(&clause_set(before))
}

/// Cuts the children of every closed inner node.
pub fn remove_uneagerness(t: &Tableau, trace: &mut TransformTrace) -> Tableau {
    let before = t.len();
    let mut out = t.clone();
    let mut touched = Vec::new();
    let mut stack = vec![Tableau::ROOT];
    while let Some(n) = stack.pop() {
        if out.is_closed_node(n) && !out.is_leaf(n) {
            out.set_children(n, Vec::new());
            touched.push(n);
        } else {
            stack.extend(out.children(n).iter().rev());
        }
    }
    let out = out.normalized();
    trace.record("eager", touched, before, &out, None);
    out
}

fn first_irregular(t: &Tableau) -> Option<NodeId> {
    t.preorder().into_iter().find(|&n| {
        t.lit(n)
            .is_some_and(|l| t.ancestors(n).into_iter().any(|a| t.lit(a) == Some(l)))
    })
}

/// Repeatedly takes the first node `N` in pre-order that repeats an
/// ancestor's label and gives `N`'s parent the children of `N`.
pub fn remove_irregularities(t: &Tableau, trace: &mut TransformTrace) -> Tableau {
    let before = t.len();
    let mut out = t.clone();
    let mut touched = Vec::new();
    while let Some(n) = first_irregular(&out) {
        let parent = out.parent(n).expect("a labelled node has a parent");
        let kids = out.children(n).to_vec();
        out.set_children(parent, kids);
        touched.push(parent);
    }
    let out = out.normalized();
    trace.record("regular", touched, before, &out, None);
    out
}

/// Right-sibling counts along the path to `n`, then ω, then the number of
/// labels in `set` of inner strict descendants of `n`.
fn leaf_only_measure(t: &Tableau, n: NodeId, set: &BTreeSet<Literal>) -> Vec<u64> {
    let mut path: Vec<NodeId> = t.ancestors(n);
    path.reverse();
    path.push(n);
    let mut out: Vec<u64> = path
        .iter()
        .map(|&x| match t.parent(x) {
            None => 0,
            Some(p) => {
                let sibs = t.children(p);
                let i = sibs
                    .iter()
                    .position(|&s| s == x)
                    .expect("child of its parent");
                (sibs.len() - 1 - i) as u64
            }
        })
        .collect();
    out.push(u64::MAX);
    let bad: BTreeSet<&Literal> = t
        .preorder_from(n)
        .into_iter()
        .filter(|&d| d != n && !t.is_leaf(d))
        .filter_map(|d| t.lit(d))
        .filter(|l| set.contains(*l))
        .collect();
    out.push(bad.len() as u64);
    out
}

fn first_inner_in(t: &Tableau, set: &BTreeSet<Literal>) -> Option<NodeId> {
    t.preorder()
        .into_iter()
        .find(|&n| !t.is_leaf(n) && t.lit(n).is_some_and(|l| set.contains(l)))
}

/// One round of the leaf-only conversion for the selected node `n`, without
/// the final simplification.
fn leaf_only_round(t: &mut Tableau, n: NodeId) {
    let parent = t.parent(n).expect("a labelled node has a parent");
    let lit = t.lit(n).cloned().expect("selected node is labelled");
    let (copy_root, map) = t.copy_subtree(parent);
    t.set_children(map[&n], Vec::new());
    let kids = t.children(n).to_vec();
    t.set_children(parent, kids);
    let complement = lit.complement();
    let targets: Vec<NodeId> = t
        .preorder_from(parent)
        .into_iter()
        .filter(|&m| t.is_leaf(m) && t.lit(m) == Some(&complement))
        .collect();
    for m in targets {
        let (fresh, _) = t.copy_subtree(copy_root);
        let kids = t.children(fresh).to_vec();
        t.set_children(m, kids);
    }
}

/// Converts a closed, eager and regular tableau so that no member of `set`
/// labels an inner node. Each round records its measure: right-sibling
/// counts from the root to the selected parent, `ω`, then the number of
/// distinct members of `set` on inner nodes below that parent.
pub fn make_leaf_only(
    t: &Tableau,
    set: &BTreeSet<Literal>,
    trace: &mut TransformTrace,
) -> Result<Tableau, TransformError> {
    if let Some(l) = set.iter().find(|l| set.contains(&l.complement())) {
        return Err(TransformError::Precondition(format!(
            "literal set contains {l} and its complement"
        )));
    }
    check_input(t)?;
    let mut out = t.clone();
    let mut rounds = 0;
    while let Some(n) = first_inner_in(&out, set) {
        rounds += 1;
        if rounds > MAX_ROUNDS {
            return Err(TransformError::RoundLimit(MAX_ROUNDS));
        }
        let before = out.len();
        let parent = out.parent(n).expect("labelled node has a parent");
        // Recorded, not enforced: the measure can grow when the next round's
        // parent node is an ancestor of this one.
        let measure = leaf_only_measure(&out, parent, set);
        leaf_only_round(&mut out, n);
        let mut inner = TransformTrace::default();
        out = remove_uneagerness(&out, &mut inner);
        out = remove_irregularities(&out, &mut inner);
        if out.len() > MAX_NODES {
            return Err(TransformError::TooLarge(MAX_NODES));
        }
        trace.record("leaf-only", vec![n], before, &out, Some(measure));
    }
    if rounds == 0 {
        trace.record("leaf-only", Vec::new(), out.len(), &out, None);
    }
    Ok(out.normalized())
}

fn check_input(t: &Tableau) -> Result<(), TransformError> {
    if !is_closed(t) {
        return Err(TransformError::Precondition("tableau is not closed".into()));
    }
    if !is_eager(t) {
        return Err(TransformError::Precondition("tableau is not eager".into()));
    }
    if !is_regular(t) {
        return Err(TransformError::Precondition(
            "tableau is not regular".into(),
        ));
    }
    Ok(())
}

fn pair_contains(pairs: &[(Literal, Literal)], a: &Literal, b: &Literal) -> bool {
    pairs
        .iter()
        .any(|(x, y)| (x == a && y == b) || (x == b && y == a))
}

/// Checks that every pair occurring in `t` only occurs in two-literal
/// clauses sharing one other literal, and that this literal labels leaves only.
fn check_pair_shapes(t: &Tableau, pairs: &[(Literal, Literal)]) -> Result<(), TransformError> {
    let clauses = t.clauses();
    for (l1, l2) in pairs {
        let mut partner: Option<&Literal> = None;
        for (_, _, c) in &clauses {
            let Some(i) = c.literals.iter().position(|l| l == l1 || l == l2) else {
                continue;
            };
            if c.len() != 2 {
                return Err(TransformError::Precondition(format!(
                    "pair member {} occurs in clause {c} with other than two literals",
                    c.literals[i]
                )));
            }
            let other = &c.literals[1 - i];
            match partner {
                None => partner = Some(other),
                Some(p) if p == other => {}
                Some(p) => {
                    return Err(TransformError::Precondition(format!(
                        "pair {{{l1}, {l2}}} occurs with both {p} and {other}"
                    )))
                }
            }
        }
        if let Some(l0) = partner {
            let inner = t
                .preorder()
                .into_iter()
                .any(|n| !t.is_leaf(n) && t.lit(n) == Some(l0));
            if inner {
                return Err(TransformError::Precondition(format!(
                    "{l0} labels an inner node"
                )));
            }
        }
    }
    Ok(())
}

/// First inner node `N` (pre-order) with a descendant `M` below a child of
/// `N` such that `{lit N, lit M}` is a pair.
fn first_non_contiguous(t: &Tableau, pairs: &[(Literal, Literal)]) -> Option<(NodeId, NodeId)> {
    for n in t.preorder() {
        let Some(ln) = t.lit(n) else { continue };
        if t.is_leaf(n) {
            continue;
        }
        for &c in t.children(n) {
            let found = t
                .preorder_from(c)
                .into_iter()
                .skip(1)
                .find(|&m| t.lit(m).is_some_and(|lm| pair_contains(pairs, ln, lm)));
            if let Some(m) = found {
                return Some((n, m));
            }
        }
    }
    None
}

/// Makes `t` contiguous for `pairs`: the selected node `N` gets fresh copies
/// of the sibling group of the distant partner `M`, and the copy of `M`
/// takes over the former children of `N`.
pub fn make_contiguous(
    t: &Tableau,
    pairs: &[(Literal, Literal)],
    trace: &mut TransformTrace,
) -> Result<Tableau, TransformError> {
    if !is_eager(t) {
        return Err(TransformError::Precondition("tableau is not eager".into()));
    }
    if !is_regular(t) {
        return Err(TransformError::Precondition(
            "tableau is not regular".into(),
        ));
    }
    check_pair_shapes(t, pairs)?;
    let limit = t.len();
    let mut out = t.clone();
    let mut steps = 0;
    // Each step is recorded before its regularity cleanup.
    while let Some((n, m)) = first_non_contiguous(&out, pairs) {
        steps += 1;
        if steps > limit {
            return Err(TransformError::Precondition(
                "contiguity conversion does not terminate".into(),
            ));
        }
        let before = out.len();
        let group = out.children(out.parent(m).expect("M is below N")).to_vec();
        let fresh: Vec<NodeId> = group.iter().map(|&s| out.add_detached_copy(s)).collect();
        let m_copy = fresh[group.iter().position(|&s| s == m).expect("M in its group")];
        let old = out.children(n).to_vec();
        out.set_children(m_copy, old);
        out.set_children(n, fresh);
        trace.record("contiguous", vec![n], before, &out, None);
        out = remove_irregularities(&out, trace);
    }
    if steps == 0 {
        trace.record("contiguous", Vec::new(), out.len(), &out, None);
    }
    Ok(out.normalized())
}

/// Eagerness, regularity, leaf-only for all negative labels, then
/// contiguity for the guard/definer pairs of `ctx`. The result is checked
/// against every requirement of access interpolant extraction.
pub fn to_aci(
    t: &Tableau,
    ctx: &AciContext,
    trace: &mut TransformTrace,
) -> Result<Tableau, TransformError> {
    let t = remove_uneagerness(t, trace);
    let t = remove_irregularities(&t, trace);
    let neg = negative_labels(&t);
    let t = make_leaf_only(&t, &neg, trace)?;
    let pairs = ctx.contiguity_pairs(&t);
    let t = make_contiguous(&t, &pairs, trace)?;
    let diag = check_aci(&t, ctx);
    if !diag.passed() {
        return Err(TransformError::NotAci(diag.to_string()));
    }
    Ok(t)
}
