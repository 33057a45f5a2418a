use std::collections::{BTreeMap, BTreeSet};

use crate::clausify::{is_rqfo, PositionKind};
use crate::logic::{garg, literal_garg, Atom, Formula, Substitution, Term};
use crate::tableau::{ClauseMeta, FormTag, NodeId, Side, Tableau};

use super::check::check_aci;
use super::context::AciContext;
use super::AccessError;

/// Access interpolant of the root of an ACI tableau, with bound variables
/// renamed `V1, V2, ...` in order of their binders.
pub fn aipol(t: &Tableau, ctx: &AciContext) -> Result<Formula, AccessError> {
    aipol_with_notes(t, ctx).map(|(f, _)| f)
}

/// Like [`aipol`], also returning violations of the expected side
/// conditions (quantified terms at input positions, non-relativized output).
pub fn aipol_with_notes(
    t: &Tableau,
    ctx: &AciContext,
) -> Result<(Formula, Vec<String>), AccessError> {
    let (mut values, notes) = extract_at(t, ctx, &[Tableau::ROOT])?;
    Ok((values.pop().expect("one node requested"), notes))
}

/// Access interpolant of every inner node of an ACI tableau, indexed by
/// node id (`None` for leaves and unreachable ids). Binders of each value
/// are renamed independently.
pub fn aipol_nodes(t: &Tableau, ctx: &AciContext) -> Result<Vec<Option<Formula>>, AccessError> {
    let inner: Vec<NodeId> = t
        .preorder()
        .into_iter()
        .filter(|&n| !t.is_leaf(n))
        .collect();
    let (values, _) = extract_at(t, ctx, &inner)?;
    let mut out = vec![None; t.arena_len()];
    for (n, v) in inner.into_iter().zip(values) {
        out[n] = Some(v);
    }
    Ok(out)
}

fn extract_at(
    t: &Tableau,
    ctx: &AciContext,
    nodes: &[NodeId],
) -> Result<(Vec<Formula>, Vec<String>), AccessError> {
    let diag = check_aci(t, ctx);
    if !diag.passed() {
        return Err(AccessError::NotAci(diag.to_string()));
    }
    let needs_meta = t
        .clauses()
        .iter()
        .any(|(n, _, _)| t.node(t.children(*n)[0]).meta.is_none());
    let annotated;
    let t = if needs_meta {
        annotated = ctx.annotate(t)?;
        &annotated
    } else {
        t
    };
    let mut ex = Extractor {
        t,
        ctx,
        counter: 0,
        notes: Vec::new(),
    };
    let mut values = Vec::with_capacity(nodes.len());
    for &n in nodes {
        ex.counter = 0;
        let out = rename_binders(&ex.value(n)?);
        if !is_rqfo(&out) {
            ex.notes
                .push(format!("extracted formula is not relativized: {out}"));
        }
        values.push(out);
    }
    Ok((values, ex.notes))
}

struct Extractor<'a> {
    t: &'a Tableau,
    ctx: &'a AciContext,
    counter: usize,
    notes: Vec<String>,
}

impl Extractor<'_> {
    fn fresh(&mut self) -> String {
        self.counter += 1;
        format!("_W{}", self.counter)
    }

    fn value(&mut self, n: NodeId) -> Result<Formula, AccessError> {
        let t = self.t;
        let kids = t.children(n).to_vec();
        if kids.is_empty() {
            return Err(AccessError::NotAci(format!(
                "node {n} is a leaf where an inner node is needed"
            )));
        }
        let first = t.node(kids[0]);
        let side = first
            .side
            .ok_or_else(|| AccessError::NotAci(format!("node {} has no side", kids[0])))?;
        let meta = first
            .meta
            .clone()
            .ok_or_else(|| AccessError::NotAci(format!("clause below node {n} has no form")))?;
        if meta.form == FormTag::Top {
            return self.value(kids[0]);
        }
        let definer = &self
            .ctx
            .position(&meta)
            .ok_or_else(|| AccessError::NotAci(format!("unknown position {}", meta.pos)))?
            .definer
            .pred;
        let head = kids
            .iter()
            .position(|&c| t.lit(c).is_some_and(|l| !l.positive && l.pred() == definer))
            .ok_or_else(|| {
                AccessError::NotAci(format!("clause below node {n} lacks its negated definer"))
            })?;
        let rest: Vec<NodeId> = kids
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != head)
            .map(|(_, &c)| c)
            .collect();
        if meta.form != FormTag::Forall {
            let vals = rest
                .iter()
                .map(|&c| self.value(c))
                .collect::<Result<Vec<_>, _>>()?;
            return Ok(match side {
                Side::Red => Formula::or_simplified(vals),
                Side::Blue => Formula::and_simplified(vals),
            });
        }
        let guard_node = rest
            .iter()
            .copied()
            .find(|&c| t.lit(c).is_some_and(|l| !l.positive))
            .ok_or_else(|| AccessError::NotAci(format!("clause below node {n} lacks a guard")))?;
        let body_node = rest
            .iter()
            .copied()
            .find(|&c| c != guard_node)
            .ok_or_else(|| {
                AccessError::NotAci(format!("clause below node {n} lacks a body definer"))
            })?;
        let target = t
            .complementary_ancestor(guard_node)
            .ok_or_else(|| AccessError::NotAci(format!("guard node {guard_node} is open")))?;
        let target_side = t
            .node(target)
            .side
            .ok_or_else(|| AccessError::NotAci(format!("node {target} has no side")))?;
        let body = self.value(body_node)?;
        if target_side == side {
            return Ok(body);
        }
        let guard = t.lit(guard_node).expect("labelled").atom.clone();
        self.quantify(n, side, &meta, guard, body)
    }

    /// The quantifier cases: terms of the guard that are not yet known on
    /// this side's branch become fresh variables.
    fn quantify(
        &mut self,
        n: NodeId,
        side: Side,
        meta: &ClauseMeta,
        guard: Atom,
        body: Formula,
    ) -> Result<Formula, AccessError> {
        let t = self.t;
        let branch: Vec<_> = std::iter::once(n)
            .chain(t.ancestors(n))
            .filter(|&a| t.node(a).side == Some(side))
            .filter_map(|a| t.lit(a))
            .collect();
        let mut known = self.ctx.garg_of(side).clone();
        known.extend(literal_garg(branch));
        let mut terms: Vec<Term> = garg(&Formula::Atom(guard.clone()))
            .into_iter()
            .filter(|x| !known.contains(x))
            .collect();
        terms.sort_by_cached_key(|x| (x.size(), x.to_string()));
        self.check_output_positions(meta, &guard, &terms);
        let mut theta = Substitution::new();
        let mut vars = Vec::new();
        for term in terms {
            let v = self.fresh();
            theta.bind(v.clone(), term);
            vars.push(v);
        }
        let pair = Formula::And(vec![Formula::Atom(guard), body]);
        let Formula::And(mut parts) = theta.top_inverse_formula(&pair)? else {
            unreachable!("top-level inverse keeps the connective");
        };
        let body = parts.pop().expect("two parts");
        let Some(Formula::Atom(guard)) = parts.pop() else {
            unreachable!("top-level inverse keeps atoms");
        };
        Ok(match side {
            Side::Red => Formula::ForallRel {
                vars,
                guard,
                body: Box::new(body),
            },
            Side::Blue => Formula::ExistsRel {
                vars,
                guard,
                body: Box::new(body),
            },
        })
    }

    /// Quantified terms are expected only where the source guard has a
    /// quantified variable.
    fn check_output_positions(&mut self, meta: &ClauseMeta, guard: &Atom, terms: &[Term]) {
        let Some(info) = self.ctx.position(meta) else {
            return;
        };
        let PositionKind::Forall { guard: pattern } = &info.kind else {
            return;
        };
        let free: BTreeSet<&str> = info.definer.args.iter().filter_map(Term::as_var).collect();
        for (i, a) in guard.args.iter().enumerate() {
            if !terms.contains(a) {
                continue;
            }
            let output = pattern.args[i].as_var().is_some_and(|v| !free.contains(v));
            if !output {
                self.notes.push(format!(
                    "{a} is quantified at input position {} of {guard}",
                    i + 1
                ));
            }
        }
    }
}

/// Renames every bound variable to `V1, V2, ...` in pre-order of binders.
/// Bound names of the input must be pairwise distinct.
fn rename_binders(f: &Formula) -> Formula {
    fn go(f: &Formula, map: &mut BTreeMap<String, String>) -> Formula {
        let rename_vars = |vars: &[String], map: &mut BTreeMap<String, String>| -> Vec<String> {
            vars.iter()
                .map(|v| {
                    let new = format!("V{}", map.len() + 1);
                    map.insert(v.clone(), new.clone());
                    new
                })
                .collect()
        };
        let atom = |a: &Atom, map: &BTreeMap<String, String>| {
            a.map_args(|t| match t.as_var().and_then(|v| map.get(v)) {
                Some(new) => Term::var(new.clone()),
                None => t.clone(),
            })
        };
        match f {
            Formula::ForallRel { vars, guard, body } => {
                let vars = rename_vars(vars, map);
                Formula::ForallRel {
                    vars,
                    guard: atom(guard, map),
                    body: Box::new(go(body, map)),
                }
            }
            Formula::ExistsRel { vars, guard, body } => {
                let vars = rename_vars(vars, map);
                Formula::ExistsRel {
                    vars,
                    guard: atom(guard, map),
                    body: Box::new(go(body, map)),
                }
            }
            Formula::And(gs) => Formula::And(gs.iter().map(|g| go(g, map)).collect()),
            Formula::Or(gs) => Formula::Or(gs.iter().map(|g| go(g, map)).collect()),
            Formula::Atom(a) => Formula::Atom(atom(a, map)),
            Formula::Not(g) => Formula::not(go(g, map)),
            other => other.clone(),
        }
    }
    go(f, &mut BTreeMap::new())
}
