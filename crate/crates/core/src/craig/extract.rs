use crate::logic::Formula;
use crate::tableau::{is_closed, NodeId, Side, Tableau, TableauError};

/// Ground interpolant of every node, indexed by node id (`None` for nodes
/// not reachable from the root).
///
/// Leaves contribute according to their own side and the side of their
/// target: `false` for red/red, the label for red/blue, its complement for
/// blue/red and `true` for blue/blue. Inner nodes combine the values of
/// their children by disjunction when the children are red and conjunction
/// when they are blue. Only `true`/`false` are folded.
pub fn ipol_nodes(t: &Tableau) -> Result<Vec<Option<Formula>>, TableauError> {
    if !is_closed(t) {
        return Err(TableauError::Precondition("closed".into()));
    }
    if t.is_empty() {
        return Err(TableauError::Precondition("non-empty".into()));
    }
    let mut out: Vec<Option<Formula>> = vec![None; t.arena_len()];
    for n in t.preorder().into_iter().rev() {
        let kids = t.children(n);
        let value = if kids.is_empty() {
            leaf_value(t, n)?
        } else {
            let side = t
                .node(kids[0])
                .side
                .ok_or(TableauError::MissingSide(kids[0]))?;
            let vals = kids
                .iter()
                .map(|&c| out[c].clone().expect("children come first"));
            match side {
                Side::Red => Formula::or_simplified(vals),
                Side::Blue => Formula::and_simplified(vals),
            }
        };
        out[n] = Some(value);
    }
    Ok(out)
}

fn leaf_value(t: &Tableau, n: NodeId) -> Result<Formula, TableauError> {
    let node = t.node(n);
    let lit = node.lit.as_ref().ok_or(TableauError::Unlabeled(n))?;
    if !lit.is_ground() {
        return Err(TableauError::Precondition("ground".into()));
    }
    let side = node.side.ok_or(TableauError::MissingSide(n))?;
    let tgt = node
        .tgt
        .filter(|&a| t.lit(a).is_some_and(|al| al.is_complement_of(lit)))
        .or_else(|| t.complementary_ancestor(n))
        .ok_or_else(|| TableauError::Precondition("closed".into()))?;
    let tgt_side = t.node(tgt).side.ok_or(TableauError::MissingSide(tgt))?;
    Ok(match (side, tgt_side) {
        (Side::Red, Side::Red) => Formula::False,
        (Side::Red, Side::Blue) => Formula::literal(lit),
        (Side::Blue, Side::Red) => Formula::literal(&lit.complement()),
        (Side::Blue, Side::Blue) => Formula::True,
    })
}

/// Ground interpolant of a closed two-sided ground tableau: the value at
/// the root.
pub fn ipol_ground(t: &Tableau) -> Result<Formula, TableauError> {
    let mut all = ipol_nodes(t)?;
    Ok(all[Tableau::ROOT].take().expect("root computed"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_literal, print_formula};

    fn add(t: &mut Tableau, parent: NodeId, lit: &str, side: Side) -> NodeId {
        t.add_child(parent, parse_literal(lit).unwrap(), Some(side), None)
    }

    #[test]
    fn red_unit_over_blue_unit() {
        let mut t = Tableau::new();
        let p = add(&mut t, 0, "p", Side::Red);
        add(&mut t, p, "~p", Side::Blue);
        t.assign_targets();
        assert_eq!(print_formula(&ipol_ground(&t).unwrap()), "p");
    }

    #[test]
    fn blue_root_clause() {
        // Blue clause ~p; red unit p closes it.
        let mut t = Tableau::new();
        let np = add(&mut t, 0, "~p", Side::Blue);
        add(&mut t, np, "p", Side::Red);
        t.assign_targets();
        assert_eq!(print_formula(&ipol_ground(&t).unwrap()), "p");
    }

    #[test]
    fn all_red_gives_false() {
        let mut t = Tableau::new();
        let p = add(&mut t, 0, "p", Side::Red);
        add(&mut t, p, "~p", Side::Red);
        t.assign_targets();
        assert_eq!(ipol_ground(&t).unwrap(), Formula::False);
    }

    #[test]
    fn per_node_values_are_kept() {
        let mut t = Tableau::new();
        let p = add(&mut t, 0, "p", Side::Red);
        let q = add(&mut t, 0, "q", Side::Red);
        add(&mut t, p, "~p", Side::Blue);
        add(&mut t, q, "~q", Side::Blue);
        t.assign_targets();
        let all = ipol_nodes(&t).unwrap();
        assert_eq!(print_formula(all[0].as_ref().unwrap()), "p | q");
        assert_eq!(print_formula(all[p].as_ref().unwrap()), "p");
        assert_eq!(print_formula(all[q].as_ref().unwrap()), "q");
    }

    #[test]
    fn open_tableau_is_rejected() {
        let mut t = Tableau::new();
        add(&mut t, 0, "p", Side::Red);
        assert!(ipol_ground(&t).is_err());
    }
}
