use std::collections::BTreeMap;

use crate::logic::{match_clause, Clause, Substitution, Term};

use super::model::{ClauseMeta, Side, Tableau, TableauError};

/// How leftover free variables of a tableau are instantiated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroundingStrategy {
    /// Every variable becomes the given constant.
    Uniform(String),
    /// Listed variables get their ground term, the rest the default constant.
    PerVariable {
        map: BTreeMap<String, Term>,
        default: String,
    },
}

/// Instantiates all variables with ground terms.
pub fn ground_tableau(t: &Tableau, strategy: &GroundingStrategy) -> Tableau {
    let ground = |term: &Term| {
        term.replace_top_down(&mut |s| match s {
            Term::Var(v) => Some(match strategy {
                GroundingStrategy::Uniform(k) => Term::constant(k.clone()),
                GroundingStrategy::PerVariable { map, default } => map
                    .get(v)
                    .cloned()
                    .unwrap_or_else(|| Term::constant(default.clone())),
            }),
            _ => None,
        })
    };
    let mut out = t.map_literals(|l| l.map_args(ground));
    out.assign_targets();
    out
}

/// Applies a substitution to every label.
pub fn instantiate(t: &Tableau, subst: &Substitution) -> Tableau {
    let mut out = t.map_literals(|l| subst.apply_literal(l));
    out.assign_targets();
    out
}

/// Which side wins when a clause instance matches input clauses of both sides.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SidePolicy {
    #[default]
    PreferRed,
    PreferBlue,
}

/// An input clause with optional definitional metadata.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SidedClause {
    pub clause: Clause,
    pub meta: Option<ClauseMeta>,
}

/// Colours every sibling group by finding an input clause it instantiates.
pub fn assign_sides(
    t: &Tableau,
    red: &[SidedClause],
    blue: &[SidedClause],
    policy: SidePolicy,
) -> Result<Tableau, TableauError> {
    let mut out = t.clone();
    let order = match policy {
        SidePolicy::PreferRed => [(Side::Red, red), (Side::Blue, blue)],
        SidePolicy::PreferBlue => [(Side::Blue, blue), (Side::Red, red)],
    };
    for (node, _, clause) in t.clauses() {
        let found = order.iter().find_map(|(side, pool)| {
            pool.iter()
                .find(|c| match_clause(&c.clause, &clause).is_some())
                .map(|c| (*side, c.meta.clone()))
        });
        let Some((side, meta)) = found else {
            return Err(TableauError::Unmatched {
                node,
                clause: clause.to_string(),
            });
        };
        for &c in t.children(node) {
            let n = out.node_mut(c);
            n.side = Some(side);
            n.meta = meta.clone();
        }
    }
    Ok(out)
}
