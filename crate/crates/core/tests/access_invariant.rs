//! Weak access interpolant invariant at every inner node of ACI tableaux,
//! checked by enumerating Herbrand models over the tableau's ground terms.

mod support;

use std::collections::BTreeSet;

use proptest::prelude::*;
use support::{ground_atoms, Interpretation};
use tabipol_core::access::{
    access_interpolate, aipol_nodes, binding_patterns, uncovered, AccessOptions, AciContext,
    PatternSign,
};
use tabipol_core::clausify::{is_rqfo, to_rqfo, Definitions, PositionKind};
use tabipol_core::logic::{garg, literal_garg, vocabulary, Atom, Formula, Literal, Term};
use tabipol_core::prover::{entails, ProofBudget, ProverKind};
use tabipol_core::syntax::{parse_formula, parse_tableau};
use tabipol_core::tableau::{NodeId, Side};
use tabipol_core::Tableau;

const MAX_ATOMS: usize = 16;

/// The definitional sentence of one side: the root definer plus one
/// implication per position. Children standing for `true` are inlined.
fn definitional_sentence(defs: &Definitions) -> Formula {
    let child = |info: &tabipol_core::clausify::PositionInfo, i: u8| match defs.child(&info.pos, i)
    {
        Some(c) if c.kind == PositionKind::True => Formula::True,
        Some(c) => Formula::Atom(c.definer.clone()),
        None => Formula::True,
    };
    let mut parts = Vec::new();
    for info in defs.positions.values() {
        let head = Formula::Atom(info.definer.clone());
        let outer: BTreeSet<String> = info.definer.vars();
        let inner = |guard: &Atom| -> Vec<String> {
            guard
                .vars()
                .into_iter()
                .filter(|v| !outer.contains(v))
                .collect()
        };
        let consequent = match &info.kind {
            PositionKind::True => continue,
            PositionKind::False => Formula::False,
            PositionKind::And => Formula::and([child(info, 1), child(info, 2)]),
            PositionKind::Or => Formula::or([child(info, 1), child(info, 2)]),
            PositionKind::Forall { guard } => Formula::forall(
                inner(guard),
                Formula::or([Formula::not(Formula::Atom(guard.clone())), child(info, 1)]),
            ),
            PositionKind::Exists { guard, .. } => Formula::exists(
                inner(guard),
                Formula::and([Formula::Atom(guard.clone()), child(info, 1)]),
            ),
        };
        parts.push(Formula::forall(
            outer,
            Formula::or([Formula::not(head), consequent]),
        ));
        if info.pos.path.is_empty() {
            parts.push(Formula::Atom(info.definer.clone()));
        }
    }
    Formula::and(parts)
}

/// Replaces every compound ground argument by a constant named after it,
/// so that the evaluator can treat ground terms as domain elements.
fn flatten_term(t: &Term) -> Term {
    if t.is_ground() && !t.is_constant() {
        Term::constant(t.to_string())
    } else {
        t.clone()
    }
}

fn flatten(f: &Formula) -> Formula {
    f.map_atoms(&mut |a| a.map_args(flatten_term))
}

fn flatten_lit(l: &Literal) -> Literal {
    l.map_args(flatten_term)
}

fn branch(t: &Tableau, n: NodeId, side: Side) -> Vec<Literal> {
    std::iter::once(n)
        .chain(t.ancestors(n))
        .filter(|&a| t.node(a).side == Some(side))
        .filter_map(|a| t.lit(a).cloned())
        .collect()
}

fn conj(lits: &[Literal]) -> Formula {
    Formula::and(lits.iter().map(|l| Formula::literal(&flatten_lit(l))))
}

struct Enumeration {
    domain: Vec<String>,
    atoms: Vec<Atom>,
}

impl Enumeration {
    fn new(formulas: &[&Formula]) -> Option<Enumeration> {
        let mut domain = BTreeSet::new();
        let mut arities = BTreeSet::new();
        for f in formulas {
            domain.extend(vocabulary(f).consts);
            f.visit_atoms(&mut |a| {
                arities.insert((a.pred.clone(), a.args.len()));
            });
        }
        let domain: Vec<String> = domain.into_iter().collect();
        if domain.len() > 2 {
            return None;
        }
        let preds: Vec<(&str, usize)> = arities.iter().map(|(p, n)| (p.as_str(), *n)).collect();
        let atoms = ground_atoms(&preds, &domain);
        (atoms.len() <= MAX_ATOMS).then_some(Enumeration { domain, atoms })
    }

    fn entails(&self, premise: &Formula, conclusion: &Formula) -> bool {
        (0u32..1 << self.atoms.len()).all(|bits| {
            let true_atoms: BTreeSet<Atom> = self
                .atoms
                .iter()
                .enumerate()
                .filter(|(i, _)| bits >> i & 1 == 1)
                .map(|(_, a)| a.clone())
                .collect();
            let m = Interpretation {
                domain: &self.domain,
                true_atoms: &true_atoms,
            };
            !m.eval(premise) || m.eval(conclusion)
        })
    }
}

/// Checks every inner node; returns how many nodes were small enough for
/// the semantic condition, or the first violation.
fn check_invariant(t: &Tableau, ctx: &AciContext) -> Result<usize, String> {
    let values = aipol_nodes(t, ctx).map_err(|e| e.to_string())?;
    let defp_f = definitional_sentence(ctx.definitions(Side::Red));
    let defp_not_g = definitional_sentence(ctx.definitions(Side::Blue));
    let f_preds = vocabulary(&defp_f).pred_names();
    let g_preds = vocabulary(&defp_not_g).pred_names();
    let (pf, pg) = (binding_patterns(&ctx.f), binding_patterns(&ctx.g));
    let mut checked = 0;
    for (n, h) in values.iter().enumerate() {
        let Some(h) = h else { continue };
        let (red, blue) = (branch(t, n, Side::Red), branch(t, n, Side::Blue));
        let at = |what: &str| format!("node {n}: {what} fails for {h}");

        let foreign: Vec<String> = vocabulary(h)
            .pred_names()
            .into_iter()
            .filter(|p| !f_preds.contains(p) || !g_preds.contains(p))
            .collect();
        if !foreign.is_empty() {
            return Err(at(&format!("predicate condition ({foreign:?})")));
        }

        // Definer-guarded patterns cannot cover a pattern of `H`, whose
        // predicates were just shown to be definer-free, so the patterns of
        // the relativized inputs decide coverage.
        let ph = binding_patterns(h);
        let bad_ex = uncovered(&ph, &pg, PatternSign::Positive);
        let bad_univ = uncovered(&ph, &pf, PatternSign::Negative);
        if !bad_ex.is_empty() || !bad_univ.is_empty() {
            return Err(at(&format!("pattern condition ({bad_ex:?} {bad_univ:?})")));
        }

        let mut premise_terms = ctx.red_garg.clone();
        premise_terms.extend(literal_garg(&red));
        let mut conclusion_terms = ctx.blue_garg.clone();
        conclusion_terms.extend(literal_garg(&blue));
        if let Some(x) = garg(h)
            .into_iter()
            .find(|x| !premise_terms.contains(x) || !conclusion_terms.contains(x))
        {
            return Err(at(&format!("ground term condition ({x})")));
        }

        let premise = Formula::and([defp_f.clone(), conj(&red)]);
        let conclusion = Formula::or([Formula::not(defp_not_g.clone()), Formula::not(conj(&blue))]);
        let h_flat = flatten(&h.expand_relativized());
        let Some(en) = Enumeration::new(&[&premise, &conclusion, &h_flat]) else {
            continue;
        };
        if !en.entails(&premise, &h_flat) {
            return Err(at("premise entailment"));
        }
        if !en.entails(&h_flat, &conclusion) {
            return Err(at("conclusion entailment"));
        }
        checked += 1;
    }
    Ok(checked)
}

const RUNNING: &str = "all X. (~r(X) | ex Y. (s(X,Y) & true))";

fn fixture(name: &str) -> Tableau {
    let path = format!(
        "{}/tests/fixtures/tab-ex-{name}.tab",
        env!("CARGO_MANIFEST_DIR")
    );
    parse_tableau(&std::fs::read_to_string(&path).unwrap()).unwrap()
}

#[test]
fn invariant_holds_on_walkthrough_results() {
    let f = parse_formula(RUNNING).unwrap();
    let ctx = AciContext::new(&f, &f).unwrap();
    for name in ["4", "1-6", "2-5", "3-7"] {
        let checked =
            check_invariant(&fixture(name), &ctx).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(checked > 0, "{name}: no node small enough to enumerate");
    }
}

fn pipeline_invariant(f: &Formula, g: &Formula, prover: ProverKind) -> Result<usize, String> {
    let opts = AccessOptions {
        prover,
        verify: false,
        ..AccessOptions::default()
    };
    let r = access_interpolate(f, g, &opts).map_err(|e| e.to_string())?;
    if !is_rqfo(&r.interpolant) || to_rqfo(&r.interpolant).is_err() {
        return Err(format!("not relativized: {}", r.interpolant));
    }
    match check_invariant(&r.tableau, &r.context)? {
        0 => Err("no node small enough to enumerate".into()),
        n => Ok(n),
    }
}

#[test]
fn invariant_holds_on_pipeline_results() {
    let cases = [
        (RUNNING, RUNNING),
        ("all X. (~r(X) | ex Y. (s(X,Y) & t(Y)))", RUNNING),
        ("(all X. (~p(X) | q(X))) & p(a)", "ex X. (q(X) & true)"),
        (
            "(ex X. (p(X) & true)) & (all X. (~p(X) | false))",
            "ex X. (q(X) & true)",
        ),
    ];
    for (f, g) in cases {
        let (f, g) = (parse_formula(f).unwrap(), parse_formula(g).unwrap());
        for prover in [ProverKind::Hyper, ProverKind::Connection] {
            pipeline_invariant(&f, &g, prover)
                .unwrap_or_else(|e| panic!("{f} / {g} via {prover:?}: {e}"));
        }
    }
}

/// Premise conjuncts and candidate conclusions over `p/1, q/1, r/2` and
/// the constant `a`; instances are the entailing combinations.
const PREMISE_POOL: [&str; 7] = [
    "p(a)",
    "r(a,a)",
    "all X. (~p(X) | q(X))",
    "all X. (~p(X) | ex Y. (r(X,Y) & q(Y)))",
    "all X Y. (~r(X,Y) | p(Y))",
    "ex X. (q(X) & p(X))",
    "all X. (~q(X) | p(X) | ex Y. (r(Y,X) & true))",
];

const CONCLUSION_POOL: [&str; 6] = [
    "q(a)",
    "ex X. (q(X) & true)",
    "ex X. (r(a,X) & q(X))",
    "all X. (~p(X) | q(X))",
    "ex X. (p(X) & q(X))",
    "p(a) | q(a)",
];

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn invariant_holds_on_random_pool_instances(
        picks in proptest::sample::subsequence((0..PREMISE_POOL.len()).collect::<Vec<_>>(), 1..=3),
        goal in 0..CONCLUSION_POOL.len(),
        hyper in any::<bool>(),
    ) {
        let f = Formula::and(picks.iter().map(|&i| parse_formula(PREMISE_POOL[i]).unwrap()));
        let g = parse_formula(CONCLUSION_POOL[goal]).unwrap();
        prop_assume!(entails(&f, &g, &ProofBudget::default()).is_yes());
        let prover = if hyper { ProverKind::Hyper } else { ProverKind::Connection };
        let outcome = pipeline_invariant(&f, &g, prover);
        prop_assert!(outcome.is_ok(), "{} / {} via {:?}: {:?}", f, g, prover, outcome);
    }
}
