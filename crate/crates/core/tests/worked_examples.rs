//! The three connection-tableau walkthroughs and the target ACI tableau for
//! `F = G = ∀x (r(x) → ∃y s(x,y))`, stored as fixtures with the clausifier's
//! Skolem names.

use tabipol_core::access::{aipol, check_aci, AciContext};
use tabipol_core::clausify::to_rqfo;
use tabipol_core::syntax::{parse_formula, parse_tableau};
use tabipol_core::tableau::{is_closed, negative_labels};
use tabipol_core::transform::{
    conserves_clauses, make_contiguous, make_leaf_only, to_aci, TransformTrace,
};
use tabipol_core::{Formula, Tableau};

const RUNNING: &str = "all X. (~r(X) | ex Y. (s(X,Y) & true))";

fn fixture(name: &str) -> Tableau {
    let path = format!(
        "{}/tests/fixtures/tab-ex-{name}.tab",
        env!("CARGO_MANIFEST_DIR")
    );
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    parse_tableau(&text).unwrap_or_else(|e| panic!("{path}: {e}"))
}

fn context() -> AciContext {
    let f = parse_formula(RUNNING).unwrap();
    AciContext::new(&f, &f).unwrap()
}

fn failing(t: &Tableau, ctx: &AciContext) -> Vec<String> {
    check_aci(t, ctx)
        .failures()
        .iter()
        .map(|c| c.property.clone())
        .collect()
}

fn golden_interpolant() -> Formula {
    to_rqfo(&parse_formula("all V1. (~r(V1) | ex V2. (s(V1,V2) & true))").unwrap()).unwrap()
}

struct Walkthrough {
    start: &'static str,
    leaf_only_stages: &'static [&'static str],
    contiguity_stage: &'static str,
    result: &'static str,
}

const WALKTHROUGHS: [Walkthrough; 3] = [
    Walkthrough {
        start: "1-1",
        leaf_only_stages: &["1-2", "1-3", "1-4"],
        contiguity_stage: "1-5",
        result: "1-6",
    },
    Walkthrough {
        start: "2-1",
        leaf_only_stages: &["2-2", "2-3"],
        contiguity_stage: "2-4",
        result: "2-5",
    },
    Walkthrough {
        start: "3-1",
        leaf_only_stages: &["3-2", "3-3", "3-4", "3-5"],
        contiguity_stage: "3-6",
        result: "3-7",
    },
];

#[test]
fn target_tableau_is_aci() {
    let ctx = context();
    assert_eq!(failing(&fixture("4"), &ctx), Vec::<String>::new());
}

#[test]
fn target_tableau_yields_the_expected_interpolant() {
    let h = aipol(&fixture("4"), &context()).unwrap();
    assert!(h.alpha_eq(&golden_interpolant()), "{h}");
    assert_eq!(
        h.to_string(),
        "all V1. (~r(V1) | (ex V2. (s(V1,V2) & true)))"
    );
}

#[test]
fn initial_stages_are_closed_but_not_leaf_only() {
    let ctx = context();
    for w in &WALKTHROUGHS {
        let t = fixture(w.start);
        assert!(is_closed(&t), "{}", w.start);
        assert!(
            failing(&t, &ctx).contains(&"leaf-only".to_string()),
            "{}",
            w.start
        );
    }
}

#[test]
fn leaf_only_results_fail_only_contiguity() {
    let ctx = context();
    for w in &WALKTHROUGHS {
        let last = w.leaf_only_stages.last().unwrap();
        assert_eq!(
            failing(&fixture(last), &ctx),
            vec!["contiguous".to_string()],
            "{last}"
        );
    }
}

#[test]
fn leaf_only_rounds_reproduce_each_stage() {
    for w in &WALKTHROUGHS {
        let t = fixture(w.start);
        let mut trace = TransformTrace::with_snapshots();
        let out = make_leaf_only(&t, &negative_labels(&t), &mut trace).unwrap();
        let got: Vec<String> = trace
            .snapshots("leaf-only")
            .iter()
            .map(|s| s.canonical_string())
            .collect();
        let want: Vec<String> = w
            .leaf_only_stages
            .iter()
            .map(|n| fixture(n).canonical_string())
            .collect();
        assert_eq!(got, want, "walkthrough from {}", w.start);
        assert_eq!(out.canonical_string(), *want.last().unwrap());
        assert!(conserves_clauses(&t, &out));
    }
}

#[test]
fn leaf_only_measures_strictly_decrease() {
    for w in &WALKTHROUGHS {
        let t = fixture(w.start);
        let mut trace = TransformTrace::default();
        make_leaf_only(&t, &negative_labels(&t), &mut trace).unwrap();
        let ms = trace.leaf_only_measures();
        assert_eq!(ms.len(), w.leaf_only_stages.len());
        assert!(ms.windows(2).all(|p| p[1] < p[0]), "{ms:?}");
    }
}

#[test]
fn contiguity_reproduces_the_final_stages() {
    let ctx = context();
    for w in &WALKTHROUGHS {
        let t = fixture(w.leaf_only_stages.last().unwrap());
        let pairs = ctx.contiguity_pairs(&t);
        let mut trace = TransformTrace::with_snapshots();
        let out = make_contiguous(&t, &pairs, &mut trace).unwrap();
        let steps = trace.snapshots("contiguous");
        assert_eq!(steps.len(), 1, "{}", w.start);
        assert_eq!(
            steps[0].canonical_string(),
            fixture(w.contiguity_stage).canonical_string()
        );
        assert_eq!(out.canonical_string(), fixture(w.result).canonical_string());
        assert!(conserves_clauses(&t, &out));
    }
}

#[test]
fn full_conversion_reaches_an_aci_tableau() {
    let ctx = context();
    for w in &WALKTHROUGHS {
        let t = fixture(w.start);
        let out = to_aci(&t, &ctx, &mut TransformTrace::default()).unwrap();
        assert_eq!(out.canonical_string(), fixture(w.result).canonical_string());
        let h = aipol(&out, &ctx).unwrap();
        assert!(h.alpha_eq(&golden_interpolant()), "{}: {h}", w.start);
    }
}

#[test]
fn first_walkthrough_ends_at_the_target_tableau() {
    assert_eq!(
        fixture("1-6").canonical_string(),
        fixture("4").canonical_string()
    );
}
