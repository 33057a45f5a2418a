use std::collections::BTreeSet;

use crate::clausify::{
    definitional_clausify_rqfo, negate_rqfo, to_rqfo, ClausalForm, ClausifyError, Definitions,
    PositionInfo, PositionKind,
};
use crate::logic::{
    garg, match_atom, match_clause, vocabulary, Formula, Literal, Substitution, Term,
};
use crate::tableau::{ClauseMeta, NodeId, PosSide, Side, Tableau, TableauError};

/// The two definitional clausal forms an access interpolant is computed
/// from, with the data the extraction and the validity check need.
#[derive(Clone, Debug)]
pub struct AciContext {
    /// `F` in relativized form.
    pub f: Formula,
    /// `G` in relativized form.
    pub g: Formula,
    /// Definitional clauses of `F` (side `L`).
    pub red: ClausalForm,
    /// Definitional clauses of `¬G` (side `R`).
    pub blue: ClausalForm,
    /// Ground arguments of the definitional sentence of `F`.
    pub red_garg: BTreeSet<Term>,
    /// Ground arguments of the definitional sentence of `¬G`.
    pub blue_garg: BTreeSet<Term>,
}

impl AciContext {
    pub fn new(f: &Formula, g: &Formula) -> Result<AciContext, ClausifyError> {
        let f = to_rqfo(f)?;
        let g = to_rqfo(g)?;
        let red = definitional_clausify_rqfo(&f, PosSide::L)?;
        let blue = definitional_clausify_rqfo(&negate_rqfo(&g)?, PosSide::R)?;
        check_fresh(&red, &g)?;
        check_fresh(&blue, &f)?;
        // Definer atoms only have variable arguments, so the ground
        // arguments of a definitional sentence are those of its source.
        let red_garg = garg(&f);
        let blue_garg = garg(&g);
        Ok(AciContext {
            f,
            g,
            red,
            blue,
            red_garg,
            blue_garg,
        })
    }

    pub fn form(&self, side: Side) -> &ClausalForm {
        match side {
            Side::Red => &self.red,
            Side::Blue => &self.blue,
        }
    }

    pub fn definitions(&self, side: Side) -> &Definitions {
        self.form(side)
            .definitions
            .as_ref()
            .expect("definitional clausification records its positions")
    }

    pub fn position(&self, meta: &ClauseMeta) -> Option<&PositionInfo> {
        self.definitions(meta.pos.side.side()).get(&meta.pos)
    }

    pub fn garg_of(&self, side: Side) -> &BTreeSet<Term> {
        match side {
            Side::Red => &self.red_garg,
            Side::Blue => &self.blue_garg,
        }
    }

    fn skolem_position(&self, fun: &str) -> Option<&PositionInfo> {
        [Side::Red, Side::Blue]
            .into_iter()
            .find_map(|s| self.definitions(s).by_skolem(fun))
    }

    pub fn is_skolem_term(&self, t: &Term) -> bool {
        t.functor()
            .is_some_and(|f| self.red.skolem_funs.contains(f) || self.blue.skolem_funs.contains(f))
    }

    /// The introducer literals of a ground Skolem term: the guard and the
    /// body definer of its existential position, instantiated for the
    /// term's arguments. `None` for other terms.
    pub fn introducers(&self, t: &Term) -> Option<Vec<Literal>> {
        let info = self.skolem_position(t.functor()?)?;
        let PositionKind::Exists { guard, skolemizer } = &info.kind else {
            return None;
        };
        let mut mu = Substitution::new();
        for (x, a) in info.definer.args.iter().zip(t.args()) {
            mu.bind(x.as_var()?.to_string(), a.clone());
        }
        let mut out = vec![Literal::pos(mu.apply_atom(&skolemizer.apply_atom(guard)))];
        if let Some(d1) = self.definitions(info.pos.side.side()).body_definer(info) {
            out.push(Literal::pos(mu.apply_atom(&skolemizer.apply_atom(d1))));
        }
        Some(out)
    }

    /// Pairs `{R_p σ_p μ, D_p1 σ_p μ}` of labels of `t`, for every
    /// existential position `p` of either side.
    pub fn contiguity_pairs(&self, t: &Tableau) -> Vec<(Literal, Literal)> {
        let labels: BTreeSet<&Literal> = t
            .preorder()
            .into_iter()
            .filter_map(|n| t.lit(n))
            .filter(|l| l.positive)
            .collect();
        let mut out = BTreeSet::new();
        for side in [Side::Red, Side::Blue] {
            let defs = self.definitions(side);
            for info in defs.positions.values() {
                let PositionKind::Exists { guard, skolemizer } = &info.kind else {
                    continue;
                };
                let Some(d1) = defs.body_definer(info) else {
                    continue;
                };
                let guard = skolemizer.apply_atom(guard);
                let d1 = skolemizer.apply_atom(d1);
                for r in &labels {
                    let mut mu = Substitution::new();
                    if !match_atom(&guard, &r.atom, &mut mu) {
                        continue;
                    }
                    for d in &labels {
                        let mut nu = mu.clone();
                        if match_atom(&d1, &d.atom, &mut nu) {
                            out.insert(((*r).clone(), (*d).clone()));
                        }
                    }
                }
            }
        }
        out.into_iter().collect()
    }

    /// Sets side and clause metadata on every sibling group by matching its
    /// clause against the definitional clauses. A side already present on
    /// the children restricts the search to that side.
    pub fn annotate(&self, t: &Tableau) -> Result<Tableau, TableauError> {
        let mut out = t.clone();
        for (node, side, clause) in t.clauses() {
            let sides = match side {
                Some(s) => vec![s],
                None => vec![Side::Red, Side::Blue],
            };
            let found = sides.into_iter().find_map(|s| {
                let form = self.form(s);
                form.clauses
                    .iter()
                    .zip(&form.meta)
                    .find(|(c, _)| match_clause(c, &clause).is_some())
                    .map(|(_, m)| (s, m.clone()))
            });
            let Some((s, meta)) = found else {
                return Err(TableauError::Unmatched {
                    node,
                    clause: clause.to_string(),
                });
            };
            set_group(&mut out, node, s, meta);
        }
        Ok(out)
    }
}

fn set_group(t: &mut Tableau, node: NodeId, side: Side, meta: Option<ClauseMeta>) {
    let kids = t.children(node).to_vec();
    for c in kids {
        let n = t.node_mut(c);
        n.side = Some(side);
        n.meta = meta.clone();
    }
}

/// Generated definers and Skolem functions must not occur in the other input.
fn check_fresh(form: &ClausalForm, other: &Formula) -> Result<(), ClausifyError> {
    let names = vocabulary(other).names();
    let defs = form
        .definitions
        .as_ref()
        .map(Definitions::definer_names)
        .unwrap_or_default();
    match defs
        .iter()
        .chain(&form.skolem_funs)
        .find(|n| names.contains(*n))
    {
        Some(n) => Err(ClausifyError::NameClash(n.clone())),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, parse_literal, parse_term};

    fn running() -> AciContext {
        let f = parse_formula("all X. (~r(X) | ex Y. (s(X,Y) & true))").unwrap();
        AciContext::new(&f, &f).unwrap()
    }

    #[test]
    fn introducers_of_skolem_terms() {
        let ctx = running();
        let g = parse_term("sk_R_e_1").unwrap();
        let intro = ctx.introducers(&g).unwrap();
        assert_eq!(
            intro,
            vec![
                parse_literal("r(sk_R_e_1)").unwrap(),
                parse_literal("d_R_1(sk_R_e_1)").unwrap()
            ]
        );
        let f = parse_term("sk_L_1_1(sk_R_e_1)").unwrap();
        assert_eq!(
            ctx.introducers(&f).unwrap(),
            vec![parse_literal("s(sk_R_e_1,sk_L_1_1(sk_R_e_1))").unwrap()]
        );
        assert!(ctx.introducers(&parse_term("a").unwrap()).is_none());
    }

    #[test]
    fn ground_arguments_of_sources() {
        let f = parse_formula("ex X. (r(X, a) & true)").unwrap();
        let ctx = AciContext::new(&f, &f).unwrap();
        assert_eq!(ctx.red_garg, BTreeSet::from([Term::constant("a")]));
    }

    #[test]
    fn name_clash_is_reported() {
        let f = parse_formula("ex X. (r(X) & true)").unwrap();
        let g = parse_formula("ex X. (d_L_e(X) & true)").unwrap();
        assert!(matches!(
            AciContext::new(&f, &g),
            Err(ClausifyError::NameClash(_))
        ));
    }
}
