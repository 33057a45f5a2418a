use std::collections::BTreeSet;
use std::fmt;

use crate::logic::{match_clause, Clause, Literal};

use super::model::{NodeId, Side, Tableau};

/// Outcome of checking one structural property.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyCheck {
    pub property: String,
    pub ok: bool,
    pub offending: Vec<NodeId>,
    pub notes: Vec<String>,
}

impl PropertyCheck {
    pub fn new(property: impl Into<String>, offending: Vec<NodeId>) -> PropertyCheck {
        PropertyCheck {
            property: property.into(),
            ok: offending.is_empty(),
            offending,
            notes: Vec::new(),
        }
    }

    pub fn with_notes(mut self, notes: Vec<String>) -> PropertyCheck {
        if !notes.is_empty() {
            self.ok = false;
        }
        self.notes.extend(notes);
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TableauDiagnostics {
    pub checks: Vec<PropertyCheck>,
}

impl TableauDiagnostics {
    pub fn push(&mut self, check: PropertyCheck) {
        self.checks.push(check);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    pub fn failures(&self) -> Vec<&PropertyCheck> {
        self.checks.iter().filter(|c| !c.ok).collect()
    }

    pub fn get(&self, property: &str) -> Option<&PropertyCheck> {
        self.checks.iter().find(|c| c.property == property)
    }
}

impl fmt::Display for TableauDiagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            write!(f, "{}: {}", c.property, if c.ok { "ok" } else { "FAILED" })?;
            if !c.offending.is_empty() {
                write!(f, " (nodes {:?})", c.offending)?;
            }
            for n in &c.notes {
                write!(f, "; {n}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Labelled leaves without a complementary ancestor.
pub fn check_closed(t: &Tableau) -> PropertyCheck {
    let open = t
        .leaves()
        .into_iter()
        .filter(|&n| n != Tableau::ROOT && !t.is_closed_node(n))
        .collect();
    PropertyCheck::new("closed", open)
}

/// A tableau is closed when all labelled leaves are closed. A root without
/// children counts as closed; it stands for a refutation by the empty clause.
pub fn is_closed(t: &Tableau) -> bool {
    check_closed(t).ok
}

pub fn check_ground(t: &Tableau) -> PropertyCheck {
    let bad = t
        .preorder()
        .into_iter()
        .filter(|&n| t.lit(n).is_some_and(|l| !l.is_ground()))
        .collect();
    PropertyCheck::new("ground", bad)
}

/// Nodes that have an ancestor with the same label.
pub fn check_regular(t: &Tableau) -> PropertyCheck {
    let bad = t
        .preorder()
        .into_iter()
        .filter(|&n| {
            t.lit(n)
                .is_some_and(|l| t.ancestors(n).iter().any(|&a| t.lit(a) == Some(l)))
        })
        .collect();
    PropertyCheck::new("regular", bad)
}

/// Inner nodes labelled with a member of `set`.
pub fn check_leaf_only(t: &Tableau, set: &BTreeSet<Literal>) -> PropertyCheck {
    let bad = t
        .inner_nodes()
        .into_iter()
        .filter(|&n| t.lit(n).is_some_and(|l| set.contains(l)))
        .collect();
    PropertyCheck::new("leaf-only", bad)
}

/// Every negative label occurring in the tableau.
pub fn negative_labels(t: &Tableau) -> BTreeSet<Literal> {
    t.preorder()
        .into_iter()
        .filter_map(|n| t.lit(n))
        .filter(|l| !l.positive)
        .cloned()
        .collect()
}

/// Nodes whose pair partner occurs on their branch other than as parent.
pub fn check_contiguous(t: &Tableau, pairs: &[(Literal, Literal)]) -> PropertyCheck {
    let mut bad = Vec::new();
    for n in t.preorder() {
        let Some(l) = t.lit(n) else { continue };
        let partners: Vec<&Literal> = pairs
            .iter()
            .filter_map(|(a, b)| {
                if a == l {
                    Some(b)
                } else if b == l {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        if partners.is_empty() {
            continue;
        }
        let parent = t.parent(n);
        let violation = t
            .ancestors(n)
            .into_iter()
            .any(|a| Some(a) != parent && t.lit(a).is_some_and(|al| partners.contains(&al)));
        if violation {
            bad.push(n);
        }
    }
    PropertyCheck::new("contiguous", bad)
}

/// Closed nodes that lie below another closed node.
pub fn check_eager(t: &Tableau) -> PropertyCheck {
    let bad = t
        .preorder()
        .into_iter()
        .filter(|&n| t.is_closed_node(n) && t.ancestors(n).iter().any(|&a| t.is_closed_node(a)))
        .collect();
    PropertyCheck::new("eager", bad)
}

/// Non-root nodes without a side, and sibling groups with mixed sides.
pub fn check_sides(t: &Tableau) -> PropertyCheck {
    let mut bad = Vec::new();
    for n in t.preorder() {
        let kids = t.children(n);
        if kids.iter().any(|&c| t.node(c).side.is_none()) {
            bad.extend(kids.iter().copied().filter(|&c| t.node(c).side.is_none()));
            continue;
        }
        if let Some(&first) = kids.first() {
            let s = t.node(first).side;
            if kids.iter().any(|&c| t.node(c).side != s) {
                bad.extend(kids.iter().copied());
            }
        }
    }
    PropertyCheck::new("sides", bad)
}

/// Inner nodes whose clause is not an instance of an input clause of the
/// children's side (or of any side when unsided).
pub fn check_clause_instances(t: &Tableau, red: &[Clause], blue: &[Clause]) -> PropertyCheck {
    let mut bad = Vec::new();
    for (n, side, clause) in t.clauses() {
        let pool: Vec<&Clause> = match side {
            Some(Side::Red) => red.iter().collect(),
            Some(Side::Blue) => blue.iter().collect(),
            None => red.iter().chain(blue).collect(),
        };
        if !pool.iter().any(|c| match_clause(c, &clause).is_some()) {
            bad.push(n);
        }
    }
    let root_only_ok = !t.is_empty() || red.iter().chain(blue).any(Clause::is_empty);
    if !root_only_ok {
        bad.push(Tableau::ROOT);
    }
    PropertyCheck::new("clause-instances", bad)
}

/// Non-root inner nodes with no child carrying the complementary label.
pub fn check_tightly_connected(t: &Tableau) -> PropertyCheck {
    let bad = t
        .inner_nodes()
        .into_iter()
        .filter(|&n| {
            let l = t.lit(n).unwrap();
            !t.children(n)
                .iter()
                .any(|&c| t.lit(c).is_some_and(|cl| cl.is_complement_of(l)))
        })
        .collect();
    PropertyCheck::new("tightly-connected", bad)
}

pub fn is_regular(t: &Tableau) -> bool {
    check_regular(t).ok
}

pub fn is_eager(t: &Tableau) -> bool {
    check_eager(t).ok
}

/// Regular and leaf-only for all negative labels.
pub fn is_positive_hyper(t: &Tableau) -> bool {
    is_regular(t) && check_leaf_only(t, &negative_labels(t)).ok
}

/// Structural validity: closed, sided, and every clause an input instance.
pub fn check_valid(t: &Tableau, red: &[Clause], blue: &[Clause]) -> TableauDiagnostics {
    let mut d = TableauDiagnostics::default();
    d.push(check_closed(t));
    d.push(check_sides(t));
    d.push(check_clause_instances(t, red, blue));
    d
}
