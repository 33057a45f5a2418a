use std::collections::{BTreeMap, BTreeSet};

use crate::logic::{Atom, Clause, Formula, Literal, Substitution, Term};
use crate::tableau::{ClauseMeta, FormTag, GlobalPosition, PosSide};

use super::rqfo::is_rqfo;
use super::standard::ClausalForm;
use super::ClausifyError;

/// What the subformula at a position is.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PositionKind {
    True,
    False,
    And,
    Or,
    Forall {
        guard: Atom,
    },
    Exists {
        guard: Atom,
        /// Maps each quantified variable to its Skolem term over the position's
        /// free variables.
        skolemizer: Substitution,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositionInfo {
    pub pos: GlobalPosition,
    /// The definer atom over the position's free variables in standard order.
    pub definer: Atom,
    pub kind: PositionKind,
}

/// Positions of a definitional clausification and their definers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Definitions {
    pub side: PosSide,
    pub positions: BTreeMap<Vec<u8>, PositionInfo>,
}

impl Definitions {
    pub fn get(&self, pos: &GlobalPosition) -> Option<&PositionInfo> {
        if pos.side != self.side {
            return None;
        }
        self.positions.get(&pos.path)
    }

    pub fn child(&self, pos: &GlobalPosition, index: u8) -> Option<&PositionInfo> {
        self.get(&pos.child(index))
    }

    /// Definer of the body below an existential position, unless the body is `true`.
    pub fn body_definer(&self, info: &PositionInfo) -> Option<&Atom> {
        let child = self.child(&info.pos, 1)?;
        (child.kind != PositionKind::True).then_some(&child.definer)
    }

    pub fn definer_names(&self) -> BTreeSet<String> {
        self.positions
            .values()
            .map(|p| p.definer.pred.clone())
            .collect()
    }

    /// Finds the position whose definer has the given predicate name.
    pub fn by_definer(&self, pred: &str) -> Option<&PositionInfo> {
        self.positions.values().find(|p| p.definer.pred == pred)
    }

    /// Finds the existential position that introduced a Skolem symbol.
    pub fn by_skolem(&self, fun: &str) -> Option<&PositionInfo> {
        self.positions.values().find(|p| match &p.kind {
            PositionKind::Exists { skolemizer, .. } => {
                skolemizer.iter().any(|(_, t)| t.functor() == Some(fun))
            }
            _ => false,
        })
    }
}

/// Name of the definer predicate at a position.
pub fn definer_name(pos: &GlobalPosition) -> String {
    format!("d_{}_{}", pos.side.letter(), pos.path_string())
}

/// Name of the Skolem function for the `index`-th (1-based) variable
/// quantified at an existential position.
pub fn skolem_name(pos: &GlobalPosition, index: usize) -> String {
    format!("sk_{}_{}_{}", pos.side.letter(), pos.path_string(), index)
}

/// Definitional clausification of a relativized sentence.
///
/// Conjunctions and disjunctions are made binary, associating to the right,
/// so positions are paths over `{1, 2}`. Clauses come in position pre-order;
/// clauses whose positive definer stands for `true` are left out, as they are
/// tautologies.
pub fn definitional_clausify_rqfo(
    f: &Formula,
    side: PosSide,
) -> Result<ClausalForm, ClausifyError> {
    if !is_rqfo(f) {
        return Err(ClausifyError::NotRqfo {
            subformula: f.to_string(),
            reason: "expected relativized quantifiers only".into(),
        });
    }
    let fv = f.free_vars();
    if !fv.is_empty() {
        return Err(ClausifyError::NotSentence(fv.into_iter().collect()));
    }
    let mut used = BTreeSet::new();
    f.visit_atoms(&mut |a| {
        used.insert(a.pred.clone());
        for t in &a.args {
            t.funs_into(&mut used);
        }
    });
    let mut builder = Builder {
        side,
        out: ClausalForm::default(),
        defs: Definitions {
            side,
            positions: BTreeMap::new(),
        },
        used,
    };
    let bin = binarize(f);
    let root = GlobalPosition::root(side);
    let top = builder.definer(&root, &bin)?;
    builder.emit(vec![Literal::pos(top)], &root, FormTag::Top)?;
    builder.walk(&bin, &root)?;
    let mut out = builder.out;
    out.side = Some(side.side());
    out.definitions = Some(builder.defs);
    Ok(out)
}

fn binarize(f: &Formula) -> Formula {
    match f {
        Formula::And(gs) | Formula::Or(gs) => {
            let parts: Vec<Formula> = gs.iter().map(binarize).collect();
            let conj = matches!(f, Formula::And(_));
            let mut iter = parts.into_iter().rev();
            let mut acc = iter
                .next()
                .unwrap_or(if conj { Formula::True } else { Formula::False });
            for p in iter {
                acc = if conj {
                    Formula::And(vec![p, acc])
                } else {
                    Formula::Or(vec![p, acc])
                };
            }
            acc
        }
        Formula::ForallRel { vars, guard, body } => Formula::ForallRel {
            vars: vars.clone(),
            guard: guard.clone(),
            body: Box::new(binarize(body)),
        },
        Formula::ExistsRel { vars, guard, body } => Formula::ExistsRel {
            vars: vars.clone(),
            guard: guard.clone(),
            body: Box::new(binarize(body)),
        },
        _ => f.clone(),
    }
}

struct Builder {
    side: PosSide,
    out: ClausalForm,
    defs: Definitions,
    used: BTreeSet<String>,
}

impl Builder {
    fn fresh(&self, name: String) -> Result<String, ClausifyError> {
        if self.used.contains(&name) {
            Err(ClausifyError::NameClash(name))
        } else {
            Ok(name)
        }
    }

    fn definer(&self, pos: &GlobalPosition, f: &Formula) -> Result<Atom, ClausifyError> {
        let args = f.free_vars().into_iter().map(Term::Var).collect();
        Ok(Atom::new(self.fresh(definer_name(pos))?, args))
    }

    fn emit(
        &mut self,
        lits: Vec<Literal>,
        pos: &GlobalPosition,
        form: FormTag,
    ) -> Result<(), ClausifyError> {
        let clause = Clause::new(lits);
        if !restriction_holds(&clause, form) {
            return Err(ClausifyError::FormRestriction {
                clause: clause.to_string(),
                form: form.number(),
            });
        }
        self.out.push(
            clause,
            Some(ClauseMeta {
                pos: pos.clone(),
                form,
            }),
        );
        Ok(())
    }

    fn walk(&mut self, f: &Formula, pos: &GlobalPosition) -> Result<(), ClausifyError> {
        let d = self.definer(pos, f)?;
        let not_d = Literal::neg(d.clone());
        let kind = match f {
            Formula::True => PositionKind::True,
            Formula::False => {
                self.emit(vec![not_d.clone()], pos, FormTag::False)?;
                PositionKind::False
            }
            Formula::And(gs) | Formula::Or(gs) => {
                let (left, right) = (&gs[0], &gs[1]);
                let (p1, p2) = (pos.child(1), pos.child(2));
                let d1 = self.definer(&p1, left)?;
                let d2 = self.definer(&p2, right)?;
                if matches!(f, Formula::And(_)) {
                    if *left != Formula::True {
                        self.emit(vec![not_d.clone(), Literal::pos(d1)], pos, FormTag::AndLeft)?;
                    }
                    if *right != Formula::True {
                        self.emit(
                            vec![not_d.clone(), Literal::pos(d2)],
                            pos,
                            FormTag::AndRight,
                        )?;
                    }
                } else if *left != Formula::True && *right != Formula::True {
                    self.emit(
                        vec![not_d.clone(), Literal::pos(d1), Literal::pos(d2)],
                        pos,
                        FormTag::Or,
                    )?;
                }
                self.record(
                    pos,
                    d,
                    if matches!(f, Formula::And(_)) {
                        PositionKind::And
                    } else {
                        PositionKind::Or
                    },
                );
                self.walk(left, &p1)?;
                return self.walk(right, &p2);
            }
            Formula::ForallRel { guard, body, .. } => {
                let p1 = pos.child(1);
                let d1 = self.definer(&p1, body)?;
                if **body != Formula::True {
                    self.emit(
                        vec![not_d.clone(), Literal::neg(guard.clone()), Literal::pos(d1)],
                        pos,
                        FormTag::Forall,
                    )?;
                }
                self.record(
                    pos,
                    d,
                    PositionKind::Forall {
                        guard: guard.clone(),
                    },
                );
                return self.walk(body, &p1);
            }
            Formula::ExistsRel { vars, guard, body } => {
                let p1 = pos.child(1);
                let args: Vec<Term> = d.args.clone();
                let mut sorted: Vec<&String> = vars.iter().collect();
                sorted.sort();
                let mut skolemizer = Substitution::new();
                for (i, v) in sorted.into_iter().enumerate() {
                    let name = self.fresh(skolem_name(pos, i + 1))?;
                    skolemizer.bind(v.clone(), Term::App(name.clone(), args.clone()));
                    self.out.skolem_funs.insert(name);
                }
                self.emit(
                    vec![not_d.clone(), Literal::pos(skolemizer.apply_atom(guard))],
                    pos,
                    FormTag::ExistsGuard,
                )?;
                if **body != Formula::True {
                    let d1 = self.definer(&p1, body)?;
                    self.emit(
                        vec![not_d.clone(), Literal::pos(skolemizer.apply_atom(&d1))],
                        pos,
                        FormTag::ExistsBody,
                    )?;
                }
                self.record(
                    pos,
                    d,
                    PositionKind::Exists {
                        guard: guard.clone(),
                        skolemizer,
                    },
                );
                return self.walk(body, &p1);
            }
            other => {
                return Err(ClausifyError::NotRqfo {
                    subformula: other.to_string(),
                    reason: "expected relativized quantifiers only".into(),
                })
            }
        };
        self.record(pos, d, kind);
        Ok(())
    }

    fn record(&mut self, pos: &GlobalPosition, definer: Atom, kind: PositionKind) {
        debug_assert_eq!(pos.side, self.side);
        self.defs.positions.insert(
            pos.path.clone(),
            PositionInfo {
                pos: pos.clone(),
                definer,
                kind,
            },
        );
    }
}

fn lit_vars(l: &Literal) -> BTreeSet<String> {
    l.atom.vars()
}

/// Checks the variable restrictions that each clause form must satisfy.
pub fn restriction_holds(c: &Clause, form: FormTag) -> bool {
    let l = &c.literals;
    let subset = |a: &BTreeSet<String>, b: &BTreeSet<String>| a.is_subset(b);
    match form {
        FormTag::Top => l.len() == 1 && l[0].positive && l[0].atom.args.is_empty(),
        FormTag::False => l.len() == 1 && !l[0].positive,
        FormTag::AndLeft | FormTag::AndRight | FormTag::ExistsBody => {
            l.len() == 2
                && !l[0].positive
                && l[1].positive
                && subset(&lit_vars(&l[1]), &lit_vars(&l[0]))
        }
        FormTag::ExistsGuard => {
            l.len() == 2
                && !l[0].positive
                && l[1].positive
                && subset(&lit_vars(&l[1]), &lit_vars(&l[0]))
                && l[1]
                    .atom
                    .args
                    .iter()
                    .all(|t| t.is_var() || t.is_constant() || t.args().iter().all(|a| a.is_var()))
        }
        FormTag::Or => {
            l.len() == 3
                && !l[0].positive
                && l[1].positive
                && l[2].positive
                && subset(&lit_vars(&l[1]), &lit_vars(&l[0]))
                && subset(&lit_vars(&l[2]), &lit_vars(&l[0]))
        }
        FormTag::Forall => {
            l.len() == 3 && !l[0].positive && !l[1].positive && l[2].positive && {
                let upper: BTreeSet<String> =
                    lit_vars(&l[0]).union(&lit_vars(&l[1])).cloned().collect();
                subset(&lit_vars(&l[2]), &upper)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clausify::{negate_rqfo, to_rqfo};
    use crate::logic::is_variant;
    use crate::syntax::{parse_formula, parse_literal};

    fn clause(lits: &[&str]) -> Clause {
        Clause::new(lits.iter().map(|l| parse_literal(l).unwrap()).collect())
    }

    fn running() -> Formula {
        to_rqfo(&parse_formula("all X. (~r(X) | ex Y. (s(X,Y) & true))").unwrap()).unwrap()
    }

    #[test]
    fn left_side_clauses() {
        let cf = definitional_clausify_rqfo(&running(), PosSide::L).unwrap();
        let expected = [
            clause(&["d_L_e"]),
            clause(&["~d_L_e", "~r(X)", "d_L_1(X)"]),
            clause(&["~d_L_1(X)", "s(X,sk_L_1_1(X))"]),
        ];
        assert_eq!(cf.len(), 3);
        for (got, want) in cf.clauses.iter().zip(&expected) {
            assert!(is_variant(got, want), "{got} vs {want}");
        }
        let forms: Vec<u8> = cf
            .meta
            .iter()
            .map(|m| m.as_ref().unwrap().form.number())
            .collect();
        assert_eq!(forms, vec![1, 6, 7]);
    }

    #[test]
    fn right_side_clauses() {
        let neg = negate_rqfo(&running()).unwrap();
        let cf = definitional_clausify_rqfo(&neg, PosSide::R).unwrap();
        let expected = [
            clause(&["d_R_e"]),
            clause(&["~d_R_e", "r(sk_R_e_1)"]),
            clause(&["~d_R_e", "d_R_1(sk_R_e_1)"]),
            clause(&["~d_R_1(X)", "~s(X,Y)", "d_R_11"]),
            clause(&["~d_R_11"]),
        ];
        assert_eq!(cf.len(), 5);
        for (got, want) in cf.clauses.iter().zip(&expected) {
            assert!(is_variant(got, want), "{got} vs {want}");
        }
        let forms: Vec<u8> = cf
            .meta
            .iter()
            .map(|m| m.as_ref().unwrap().form.number())
            .collect();
        assert_eq!(forms, vec![1, 7, 8, 6, 2]);
        let defs = cf.definitions.unwrap();
        assert_eq!(
            defs.by_skolem("sk_R_e_1").unwrap().pos.path,
            Vec::<u8>::new()
        );
    }

    #[test]
    fn binarizes_to_the_right() {
        let f = parse_formula("ex X. (p(X) & (q(X) | r(X) | s(X)))").unwrap();
        let cf = definitional_clausify_rqfo(&to_rqfo(&f).unwrap(), PosSide::L).unwrap();
        let defs = cf.definitions.unwrap();
        assert_eq!(defs.positions[&vec![1]].kind, PositionKind::Or);
        assert_eq!(defs.positions[&vec![1, 2]].kind, PositionKind::Or);
        assert!(defs.positions.contains_key(&vec![1, 2, 2]));
        assert!(cf.meta.iter().all(Option::is_some));
    }

    #[test]
    fn rejects_plain_quantifiers() {
        let f = parse_formula("all X. p(X)").unwrap();
        assert!(definitional_clausify_rqfo(&f, PosSide::L).is_err());
    }
}
