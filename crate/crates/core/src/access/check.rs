use crate::logic::match_clause;
use crate::tableau::{
    check_closed, check_contiguous, check_ground, check_leaf_only, check_regular, check_sides,
    negative_labels, PropertyCheck, Tableau, TableauDiagnostics,
};

use super::context::AciContext;

/// Checks every requirement on a tableau used for access interpolant
/// extraction: clauses are instances of the definitional clauses of their
/// side; closed, ground, sided, regular; negative labels only at leaves;
/// contiguous for the guard/definer pairs occurring as labels; every Skolem
/// argument is introduced on or above its node.
pub fn check_aci(t: &Tableau, ctx: &AciContext) -> TableauDiagnostics {
    let mut d = TableauDiagnostics::default();
    d.push(check_forms(t, ctx));
    d.push(check_closed(t));
    d.push(check_ground(t));
    d.push(check_sides(t));
    d.push(check_regular(t));
    d.push(check_leaf_only(t, &negative_labels(t)));
    d.push(check_contiguous(t, &ctx.contiguity_pairs(t)));
    d.push(check_introducers(t, ctx));
    d
}

fn check_forms(t: &Tableau, ctx: &AciContext) -> PropertyCheck {
    let mut bad = Vec::new();
    if t.is_empty() {
        bad.push(Tableau::ROOT);
    }
    for (node, side, clause) in t.clauses() {
        let Some(side) = side else {
            bad.push(node);
            continue;
        };
        let meta = t.node(t.children(node)[0]).meta.clone();
        let form = ctx.form(side);
        let ok = form
            .clauses
            .iter()
            .zip(&form.meta)
            .any(|(c, m)| (meta.is_none() || *m == meta) && match_clause(c, &clause).is_some());
        if !ok {
            bad.push(node);
        }
    }
    PropertyCheck::new("clause-forms", bad)
}

/// Nodes with a Skolem-headed argument that neither they nor an ancestor
/// introduce.
fn check_introducers(t: &Tableau, ctx: &AciContext) -> PropertyCheck {
    let mut bad = Vec::new();
    let mut notes = Vec::new();
    for n in t.preorder() {
        let Some(lit) = t.lit(n) else { continue };
        for arg in lit.atom.args.iter().filter(|a| ctx.is_skolem_term(a)) {
            let Some(intro) = ctx.introducers(arg) else {
                continue;
            };
            let introduced = std::iter::once(n)
                .chain(t.ancestors(n))
                .any(|a| t.lit(a).is_some_and(|l| intro.contains(l)));
            if !introduced {
                bad.push(n);
                notes.push(format!("{arg} in {lit}"));
                break;
            }
        }
    }
    PropertyCheck::new("introducers", bad).with_notes(notes)
}
