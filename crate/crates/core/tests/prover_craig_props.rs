//! Property tests for the provers and Craig-Lyndon interpolation, against
//! truth-table oracles.

mod support;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::Rng;
use support::{entails_by_enumeration, prop_atom, random_prop_cnf};
use tabipol_core::clausify::{clausify, ClausalForm};
use tabipol_core::craig::{
    interpolate, interpolate_horn, ipol_nodes, InterpolationOptions, Quantifier,
};
use tabipol_core::logic::{literal_occurrences, vocabulary, Atom, Clause, Formula};
use tabipol_core::prover::{
    entails, prove_connection, prove_hyper, ClauseSet, ExhaustReason, ProofBudget, StartPolicy,
};
use tabipol_core::syntax::parse_formula;
use tabipol_core::tableau::{
    check_valid, ground_tableau, is_positive_hyper, GroundingStrategy, Side, Tableau,
};

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

const PROP_ATOMS: usize = 8;

fn random_clause_set(seed: u64) -> (Vec<Clause>, Formula) {
    let mut rng = support::rng(seed);
    let n_atoms = rng.gen_range(1..=PROP_ATOMS);
    let cnf = random_prop_cnf(&mut rng, n_atoms, 10);
    let formula = support::cnf_formula(&cnf);
    (cnf.into_iter().map(Clause::new).collect(), formula)
}

fn red_only(clauses: &[Clause]) -> ClauseSet {
    ClauseSet::two_sided(
        &ClausalForm::new(clauses.to_vec()).with_side(Side::Red),
        &ClausalForm::default(),
    )
}

fn unsatisfiable(f: &Formula) -> bool {
    let atoms: Vec<Atom> = (0..PROP_ATOMS).map(prop_atom).collect();
    entails_by_enumeration(f, &Formula::False, &atoms, &[])
}

fn ground_clause_formula(clauses: &[Clause]) -> Formula {
    Formula::and(
        clauses
            .iter()
            .map(|c| Formula::or(c.literals.iter().map(Formula::literal))),
    )
}

fn branch(t: &Tableau, n: usize, side: Side) -> Formula {
    let lits: Vec<Formula> = std::iter::once(n)
        .chain(t.ancestors(n))
        .filter(|&a| t.node(a).side == Some(side))
        .filter_map(|a| t.lit(a).map(Formula::literal))
        .collect();
    Formula::and(lits)
}

fn tableau_atoms(t: &Tableau) -> Vec<Atom> {
    let set: BTreeSet<Atom> = t
        .preorder()
        .into_iter()
        .filter_map(|n| t.lit(n).map(|l| l.atom.clone()))
        .collect();
    set.into_iter().collect()
}

proptest! {
    #![proptest_config(config(1000))]

    #[test]
    fn connection_prover_agrees_with_truth_tables(seed in any::<u64>()) {
        let (clauses, formula) = random_clause_set(seed);
        let expected = unsatisfiable(&formula);
        let set = red_only(&clauses);
        match prove_connection(&set, StartPolicy::default(), &ProofBudget::default()) {
            Ok(t) => {
                prop_assert!(expected, "proof for satisfiable {}", formula);
                let d = check_valid(&t, &clauses, &[]);
                prop_assert!(d.passed(), "{}", d);
            }
            Err(e) => {
                prop_assert!(!expected, "no proof for unsatisfiable {}: {}", formula, e);
                prop_assert_eq!(e.reason, ExhaustReason::Saturated);
            }
        }
    }

    #[test]
    fn hyper_prover_agrees_and_builds_hyper_tableaux(seed in any::<u64>()) {
        let (clauses, formula) = random_clause_set(seed);
        let expected = unsatisfiable(&formula);
        match prove_hyper(&red_only(&clauses), &ProofBudget::default()) {
            Ok(t) => {
                prop_assert!(expected, "proof for satisfiable {}", formula);
                prop_assert!(is_positive_hyper(&t));
                let d = check_valid(&t, &clauses, &[]);
                prop_assert!(d.passed(), "{}", d);
            }
            Err(e) => prop_assert!(!expected, "no proof for unsatisfiable {}: {}", formula, e),
        }
    }
}

proptest! {
    #![proptest_config(config(200))]

    #[test]
    fn proofs_use_input_functions_and_one_fresh_constant(seed in any::<u64>()) {
        let (f, g) = support::random_horn_instance(&mut support::rng(seed));
        let red = clausify(&f).unwrap().with_side(Side::Red);
        let blue = clausify(&Formula::not(g)).unwrap().with_side(Side::Blue);
        let set = ClauseSet::two_sided(&red, &blue);
        let mut allowed: BTreeSet<String> = red.funs().into_iter().chain(blue.funs()).collect();
        prop_assume!(!allowed.contains("k"));
        allowed.insert("k".into());
        for proof in [
            prove_connection(&set, StartPolicy::default(), &ProofBudget::default()),
            prove_hyper(&set, &ProofBudget::default()),
        ] {
            let proof = proof.map_err(|e| TestCaseError::fail(e.to_string()))?;
            let grounded = ground_tableau(&proof, &GroundingStrategy::Uniform("k".into()));
            let mut used = BTreeSet::new();
            for (_, _, c) in grounded.clauses() {
                c.funs_into(&mut used);
            }
            prop_assert!(used.is_subset(&allowed), "{:?} not within {:?}", used, allowed);
        }
    }

    #[test]
    fn node_interpolants_separate_the_branch_sides(seed in any::<u64>()) {
        let t = support::random_closed_tableau(&mut support::rng(seed), 4);
        let (red, blue) = support::tableau_clauses(&t);
        let (f_red, f_blue) = (ground_clause_formula(&red), ground_clause_formula(&blue));
        let allowed: BTreeSet<_> = literal_occurrences(&f_red)
            .intersection(&literal_occurrences(&Formula::not(f_blue.clone())))
            .cloned()
            .collect();
        let atoms = tableau_atoms(&t);
        let values = ipol_nodes(&t).unwrap();
        for n in t.preorder() {
            let h = values[n].as_ref().expect("reachable nodes have values");
            let premise = Formula::and([f_red.clone(), branch(&t, n, Side::Red)]);
            let conclusion = Formula::or([Formula::not(f_blue.clone()), Formula::not(branch(&t, n, Side::Blue))]);
            prop_assert!(entails_by_enumeration(&premise, h, &atoms, &[]), "node {}: premise does not entail {}", n, h);
            prop_assert!(entails_by_enumeration(h, &conclusion, &atoms, &[]), "node {}: {} does not entail conclusion", n, h);
            for l in literal_occurrences(h) {
                prop_assert!(allowed.contains(&l), "node {}: literal {} of {}", n, l, h);
            }
        }
    }
}

proptest! {
    #![proptest_config(config(500))]

    #[test]
    fn propositional_round_trip(seed in any::<u64>()) {
        let (f, g) = support::random_entailing_prop_pair(&mut support::rng(seed));
        let r = interpolate(&f, &g, &InterpolationOptions::default()).unwrap();
        let report = r.verification.as_ref().unwrap();
        prop_assert!(report.passed(), "{}: {:?}", r.interpolant, report);
        let atoms: Vec<Atom> = (0..PROP_ATOMS).map(prop_atom).collect();
        prop_assert!(entails_by_enumeration(&f, &r.interpolant, &atoms, &[]));
        prop_assert!(entails_by_enumeration(&r.interpolant, &g, &atoms, &[]));
    }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn horn_premises_give_horn_interpolants(seed in any::<u64>()) {
        let (f, g) = support::random_horn_instance(&mut support::rng(seed));
        let r = interpolate_horn(&f, &g, &InterpolationOptions::default()).unwrap();
        prop_assert!(r.interpolant.is_horn(), "{}", r.interpolant);
        prop_assert!(r.notes.is_empty(), "{:?}", r.notes);
    }
}

const FO_PREMISES: [&str; 7] = [
    "all X. p(X, f(X))",
    "all X. (~q(X) | q(h(X)))",
    "q(a)",
    "ex X. q(X)",
    "all X. ex Y. r(X, Y)",
    "all X Y. (~r(X, Y) | q(Y))",
    "p(a, g(a))",
];

const FO_CONCLUSIONS: [&str; 7] = [
    "ex X. q(X)",
    "ex X Y. p(X, Y)",
    "q(h(a))",
    "all X. ex Y. p(X, Y)",
    "(ex Y. q(Y)) | (ex Z. r(a, Z))",
    "q(h(h(a)))",
    "ex X. p(a, X)",
];

fn has_quantifier(f: &Formula, universal: bool) -> bool {
    let mut found = false;
    f.nnf().visit(&mut |g| match g {
        Formula::Forall(..) | Formula::ForallRel { .. } => found |= universal,
        Formula::Exists(..) | Formula::ExistsRel { .. } => found |= !universal,
        _ => {}
    });
    found
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn lifted_prefixes_follow_subterms_and_inputs(
        picks in proptest::sample::subsequence((0..FO_PREMISES.len()).collect::<Vec<_>>(), 1..=3),
        goal in 0..FO_CONCLUSIONS.len(),
    ) {
        let f = Formula::and(picks.iter().map(|&i| parse_formula(FO_PREMISES[i]).unwrap()));
        let g = parse_formula(FO_CONCLUSIONS[goal]).unwrap();
        prop_assume!(entails(&f, &g, &ProofBudget::default()).is_yes());
        let r = interpolate(&f, &g, &InterpolationOptions::default()).unwrap();
        prop_assert!(r.verified(), "{}: {:?} {:?}", r.interpolant, r.verification, r.notes);
        let ctx = r.lifting.as_ref().unwrap();
        prop_assert!(ctx.prefix_respects_subterms(), "{:?}", ctx);
        let (vf, vg) = (vocabulary(&f), vocabulary(&g));
        let k = tabipol_core::Term::constant(r.k.clone());
        let counted = |q: Quantifier| ctx.prefix.iter().any(|(v, pq)| *pq == q && ctx.stt.get(v) != Some(&k));
        if counted(Quantifier::Exists) {
            prop_assert!(has_quantifier(&f, false) || !vf.funs.is_subset(&vg.funs), "{} from {} / {}", r.interpolant, f, g);
        }
        if counted(Quantifier::Forall) {
            prop_assert!(has_quantifier(&g, true) || !vg.funs.is_subset(&vf.funs), "{} from {} / {}", r.interpolant, f, g);
        }
    }
}
