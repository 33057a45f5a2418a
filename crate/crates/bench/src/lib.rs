//! Scalable benchmark instances.

use tabipol_core::access::AccessOptions;
use tabipol_core::craig::InterpolationOptions;
use tabipol_core::prover::{ProofBudget, ProverKind};
use tabipol_core::syntax::{parse_formula, parse_tableau};
use tabipol_core::{Formula, Tableau};

/// Proofs of the chains below get longer with `n`, past the default
/// deepening bound.
pub fn budget_for(n: usize) -> ProofBudget {
    ProofBudget {
        max_depth: 4 * n + 12,
        timeout_ms: 60_000,
        ..ProofBudget::default()
    }
}

pub fn craig_options(n: usize) -> InterpolationOptions {
    InterpolationOptions {
        budget: budget_for(n),
        ..InterpolationOptions::default()
    }
}

pub fn access_options(n: usize, prover: ProverKind) -> AccessOptions {
    AccessOptions {
        prover,
        budget: budget_for(n),
        ..AccessOptions::default()
    }
}

/// `p0(a)` with `n` implications `p_i(X) → p_{i+1}(X)`, entailing `p_n(a)`.
pub fn implication_chain(n: usize) -> (Formula, Formula) {
    let mut parts = vec!["p0(a)".to_string()];
    parts.extend((0..n).map(|i| format!("(all X. (~p{i}(X) | p{}(X)))", i + 1)));
    let f = parse_formula(&parts.join(" & ")).expect("chain premise parses");
    let g = parse_formula(&format!("p{n}(a)")).expect("chain conclusion parses");
    (f, g)
}

/// Propositional `a0 ∧ (a0 → a1) ∧ ... ` against `a_n ∨ b`, with `b` only on
/// the conclusion side.
pub fn propositional_chain(n: usize) -> (Formula, Formula) {
    let mut parts = vec!["a0".to_string()];
    parts.extend((0..n).map(|i| format!("(~a{i} | a{})", i + 1)));
    let f = parse_formula(&parts.join(" & ")).expect("propositional premise parses");
    let g = parse_formula(&format!("a{n} | b")).expect("propositional conclusion parses");
    (f, g)
}

/// Relativized chain: every `r_i` element has an `s_i` successor that is an
/// `r_{i+1}` element; the conclusion asks for an `s_{n-1}` edge from an
/// `r_{n-1}` element reachable from `a`.
pub fn guarded_chain(n: usize) -> (Formula, Formula) {
    assert!(n >= 1);
    let mut parts = vec!["r0(a)".to_string()];
    parts.extend(
        (0..n).map(|i| format!("(all X. (~r{i}(X) | (ex Y. (s{i}(X,Y) & r{}(Y)))))", i + 1)),
    );
    let f = parse_formula(&parts.join(" & ")).expect("guarded premise parses");
    let g = parse_formula(&format!("ex X. (r{n}(X) & true)")).expect("guarded conclusion parses");
    (f, g)
}

pub const RUNNING_SENTENCE: &str = "all X. (~r(X) | ex Y. (s(X,Y) & true))";

/// A ground closed tableau for the running sentence entailing itself that
/// is neither leaf-only nor contiguous.
pub fn unrestricted_running_proof() -> Tableau {
    parse_tableau(include_str!("../../core/tests/fixtures/tab-ex-1-1.tab")).expect("fixture parses")
}
