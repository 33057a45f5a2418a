use std::collections::{BTreeMap, BTreeSet};

use crate::clausify::{add_equality_axioms, clause_formula, ClausalForm, Clausifier};
use crate::logic::{Formula, FreshNames, Literal, Term};
use crate::prover::{prove, ClauseSet, ProofBudget, ProverKind, RENAME_THRESHOLD};
use crate::tableau::{assign_sides, ground_tableau, GroundingStrategy, Side, SidePolicy, Tableau};

use super::extract::ipol_ground;
use super::lift::{lift, LiftingContext, Quantifier};
use super::verify::{verify_craig_lyndon, CraigReport};
use super::InterpolationError;

/// How free variables of the proof are grounded.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum Grounding {
    /// Every variable becomes the fresh constant `k`.
    #[default]
    Uniform,
    /// Listed variables get the given ground term, the rest `k`.
    PerVariable(BTreeMap<String, Term>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterpolationOptions {
    pub prover: ProverKind,
    pub budget: ProofBudget,
    pub grounding: Grounding,
    pub side_policy: SidePolicy,
    /// Treat terms headed by `k` like red-only terms (existential) instead
    /// of blue-only ones (universal).
    pub k_in_red: bool,
    /// Add axioms for the equality predicate `eq`.
    pub equality: bool,
    pub verify: bool,
}

impl Default for InterpolationOptions {
    fn default() -> Self {
        InterpolationOptions {
            prover: ProverKind::Connection,
            budget: ProofBudget::default(),
            grounding: Grounding::Uniform,
            side_policy: SidePolicy::PreferRed,
            k_in_red: false,
            equality: false,
            verify: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct InterpolationResult {
    pub interpolant: Formula,
    /// Value extracted from the ground tableau, before lifting.
    pub ground_interpolant: Formula,
    /// The grounded two-sided tableau.
    pub tableau: Tableau,
    pub lifting: Option<LiftingContext>,
    pub red: ClausalForm,
    pub blue: ClausalForm,
    /// Name of the grounding constant.
    pub k: String,
    pub verification: Option<CraigReport>,
    /// Structural claims about the interpolant that did not hold.
    pub notes: Vec<String>,
}

impl InterpolationResult {
    pub fn verified(&self) -> bool {
        self.verification.as_ref().is_some_and(CraigReport::passed) && self.notes.is_empty()
    }
}

/// The formula pair an interpolant is checked against. With equality axioms
/// the red axioms strengthen `F` and the blue ones weaken `G`.
pub fn augmented_pair(
    f: &Formula,
    g: &Formula,
    red: &ClausalForm,
    blue: &ClausalForm,
    red_base: usize,
    blue_base: usize,
) -> (Formula, Formula) {
    let red_ax: Vec<Formula> = red.clauses[red_base..].iter().map(clause_formula).collect();
    let blue_ax: Vec<Formula> = blue.clauses[blue_base..]
        .iter()
        .map(clause_formula)
        .collect();
    if red_ax.is_empty() && blue_ax.is_empty() {
        return (f.clone(), g.clone());
    }
    let f_aug = Formula::and(std::iter::once(f.clone()).chain(red_ax));
    let g_aug = if blue_ax.is_empty() {
        g.clone()
    } else {
        Formula::or(vec![g.clone(), Formula::not(Formula::and(blue_ax))])
    };
    (f_aug, g_aug)
}

struct Prepared {
    red: ClausalForm,
    blue: ClausalForm,
    f_check: Formula,
    g_check: Formula,
    k: String,
}

fn prepare(
    f: &Formula,
    g: &Formula,
    opts: &InterpolationOptions,
) -> Result<Prepared, InterpolationError> {
    opts.budget
        .validate()
        .map_err(InterpolationError::Options)?;
    // Definitions stay on one side, so they never reach the interpolant.
    let mut cl = Clausifier::for_formulas([f, g]).with_renaming(RENAME_THRESHOLD);
    let red = cl.clausify(f)?.with_side(Side::Red);
    let blue = cl.clausify(&Formula::not(g.clone()))?.with_side(Side::Blue);
    let (red_base, blue_base) = (red.len(), blue.len());
    let (red, blue) = if opts.equality {
        add_equality_axioms(&red, &blue)
    } else {
        (red, blue)
    };
    let (f_check, g_check) = augmented_pair(f, g, &red, &blue, red_base, blue_base);
    let mut names = FreshNames::avoiding(red.funs().into_iter().chain(blue.funs()));
    for c in red.clauses.iter().chain(&blue.clauses) {
        for l in &c.literals {
            names.reserve(l.atom.pred.clone());
        }
    }
    let k = names.fresh_like("k");
    Ok(Prepared {
        red,
        blue,
        f_check,
        g_check,
        k,
    })
}

/// The pair `(F', G')` an interpolant of `F ⊨ G` is verified against under
/// `opts`: the inputs themselves, or their augmented forms with equality.
pub fn verification_pair(
    f: &Formula,
    g: &Formula,
    opts: &InterpolationOptions,
) -> Result<(Formula, Formula), InterpolationError> {
    let p = prepare(f, g, opts)?;
    Ok((p.f_check, p.g_check))
}

/// Builds the grounded two-sided tableau and its ground interpolant; `None`
/// for the tableau when an input clausifies to the empty clause.
fn ground_proof(
    p: &Prepared,
    opts: &InterpolationOptions,
    kind: ProverKind,
) -> Result<(Tableau, Formula), InterpolationError> {
    if p.red.has_empty_clause() {
        return Ok((Tableau::new(), Formula::False));
    }
    if p.blue.has_empty_clause() {
        return Ok((Tableau::new(), Formula::True));
    }
    let set = ClauseSet::two_sided(&p.red, &p.blue);
    let proof = prove(kind, &set, &opts.budget)?;
    let sided = assign_sides(&proof, &p.red.sided(), &p.blue.sided(), opts.side_policy)?;
    let strategy = match &opts.grounding {
        Grounding::Uniform => GroundingStrategy::Uniform(p.k.clone()),
        Grounding::PerVariable(map) => GroundingStrategy::PerVariable {
            map: map.clone(),
            default: p.k.clone(),
        },
    };
    let ground = ground_tableau(&sided, &strategy);
    let h_b = ipol_ground(&ground)?;
    Ok((ground, h_b))
}

fn side_sets(p: &Prepared, k_in_red: bool) -> (BTreeSet<String>, BTreeSet<String>) {
    let (fr, fb) = (p.red.funs(), p.blue.funs());
    let mut f_set: BTreeSet<String> = fr.difference(&fb).cloned().collect();
    let mut g_set: BTreeSet<String> = fb.difference(&fr).cloned().collect();
    if k_in_red {
        f_set.insert(p.k.clone());
    } else {
        g_set.insert(p.k.clone());
    }
    (f_set, g_set)
}

/// Craig-Lyndon interpolation of `F ⊨ G` from a closed clausal tableau.
///
/// Clausifies `F` and `¬G`, finds a proof, colours it, grounds the leftover
/// variables with a fresh constant, extracts the ground interpolant and
/// lifts side-exclusive terms into a quantifier prefix.
pub fn interpolate(
    f: &Formula,
    g: &Formula,
    opts: &InterpolationOptions,
) -> Result<InterpolationResult, InterpolationError> {
    let p = prepare(f, g, opts)?;
    let (tableau, h_b) = ground_proof(&p, opts, opts.prover)?;
    let (f_set, g_set) = side_sets(&p, opts.k_in_red);
    let (interpolant, ctx) = lift(&h_b, &f_set, &g_set)?;
    let mut notes = Vec::new();
    if !ctx.prefix_respects_subterms() {
        notes.push("prefix order violates the subterm order".into());
    }
    notes.extend(quantifier_notes(&p, &ctx));
    let verification = opts
        .verify
        .then(|| verify_craig_lyndon(&p.f_check, &p.g_check, &interpolant, &opts.budget));
    Ok(InterpolationResult {
        interpolant,
        ground_interpolant: h_b,
        tableau,
        lifting: Some(ctx),
        red: p.red,
        blue: p.blue,
        k: p.k,
        verification,
        notes,
    })
}

/// Existential prefix variables need red-only functions or red Skolem
/// functions; universal ones dually. Variables that replace the grounding
/// constant itself are exempt: they stand for an arbitrary domain element.
fn quantifier_notes(p: &Prepared, ctx: &LiftingContext) -> Vec<String> {
    let k = Term::constant(p.k.clone());
    let counted = |q: Quantifier| {
        ctx.prefix
            .iter()
            .any(|(v, pq)| *pq == q && ctx.stt.get(v) != Some(&k))
    };
    let (fr, fb) = (p.red.funs(), p.blue.funs());
    let red_only = fr.difference(&fb).next().is_some();
    let blue_only = fb.difference(&fr).next().is_some();
    let mut notes = Vec::new();
    if counted(Quantifier::Exists) && !(red_only || !p.red.skolem_funs.is_empty()) {
        notes.push("existential quantifier without red-only functions".into());
    }
    if counted(Quantifier::Forall) && !(blue_only || !p.blue.skolem_funs.is_empty()) {
        notes.push("universal quantifier without blue-only functions".into());
    }
    notes
}

fn is_universal(f: &Formula) -> bool {
    let (prefix, matrix) = f.split_prefix();
    matrix.is_quantifier_free() && prefix.iter().all(|(_, forall)| *forall)
}

fn is_existential(f: &Formula) -> bool {
    let (prefix, matrix) = f.split_prefix();
    matrix.is_quantifier_free() && prefix.iter().all(|(_, forall)| !*forall)
}

/// Interpolation with a Horn sentence `F`: the interpolant is a Horn
/// sentence. Uses the hyper tableau prover; the ground interpolant is
/// brought into conjunctive normal form before lifting.
///
/// If `F` and `G` are universal and every function of `F` occurs in `G`,
/// the result is universal; if both are existential and every function of
/// `G` occurs in `F`, it is existential (the grounding constant is then
/// treated as red-only). Violations are reported in `notes`.
pub fn interpolate_horn(
    f: &Formula,
    g: &Formula,
    opts: &InterpolationOptions,
) -> Result<InterpolationResult, InterpolationError> {
    if !f.is_horn() {
        return Err(InterpolationError::NotHorn);
    }
    let p = prepare(f, g, opts)?;
    if let Some(c) = p.red.clauses.iter().find(|c| !c.is_horn()) {
        return Err(InterpolationError::NotHornClause(c.to_string()));
    }
    let vf = crate::logic::vocabulary(f);
    let vg = crate::logic::vocabulary(g);
    let universal_case = is_universal(f) && is_universal(g) && vf.funs.is_subset(&vg.funs);
    let existential_case = is_existential(f) && is_existential(g) && vg.funs.is_subset(&vf.funs);
    let (tableau, h_b) = ground_proof(&p, opts, ProverKind::Hyper)?;
    let h_cnf = ground_cnf(&h_b);
    let mut notes = Vec::new();
    let (f_set, g_set) = side_sets(&p, opts.k_in_red || existential_case);
    let (interpolant, ctx) = lift(&h_cnf, &f_set, &g_set)?;
    if !interpolant.is_horn() {
        notes.push("interpolant matrix is not Horn".into());
    }
    let (prefix, _) = interpolant.split_prefix();
    if universal_case && prefix.iter().any(|(_, forall)| !forall) {
        notes.push("universal inputs gave an existential quantifier".into());
    }
    if existential_case && prefix.iter().any(|(_, forall)| *forall) {
        notes.push("existential inputs gave a universal quantifier".into());
    }
    let verification = opts
        .verify
        .then(|| verify_craig_lyndon(&p.f_check, &p.g_check, &interpolant, &opts.budget));
    Ok(InterpolationResult {
        interpolant,
        ground_interpolant: h_b,
        tableau,
        lifting: Some(ctx),
        red: p.red,
        blue: p.blue,
        k: p.k,
        verification,
        notes,
    })
}

/// Conjunctive normal form of a quantifier-free formula by distribution,
/// dropping tautologies and duplicate literals.
pub fn ground_cnf(f: &Formula) -> Formula {
    let clauses = cnf_clauses(&f.nnf());
    Formula::and_simplified(
        clauses
            .into_iter()
            .map(|c| Formula::or_simplified(c.iter().map(Formula::literal))),
    )
}

fn cnf_clauses(f: &Formula) -> Vec<Vec<Literal>> {
    match f {
        Formula::True => Vec::new(),
        Formula::False => vec![Vec::new()],
        Formula::And(gs) => {
            let mut out: Vec<Vec<Literal>> = Vec::new();
            for g in gs {
                for c in cnf_clauses(g) {
                    if !out.contains(&c) {
                        out.push(c);
                    }
                }
            }
            out
        }
        Formula::Or(gs) => {
            let mut acc: Vec<Vec<Literal>> = vec![Vec::new()];
            for g in gs {
                let part = cnf_clauses(g);
                let mut next = Vec::new();
                for a in &acc {
                    for b in &part {
                        let mut c = a.clone();
                        for l in b {
                            if !c.contains(l) {
                                c.push(l.clone());
                            }
                        }
                        let tautology = c.iter().any(|l| c.contains(&l.complement()));
                        if !tautology && !next.contains(&c) {
                            next.push(c);
                        }
                    }
                }
                acc = next;
            }
            acc
        }
        other => match other.as_literal() {
            Some(l) => vec![vec![l]],
            None => panic!("ground_cnf expects a quantifier-free formula"),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, print_formula};

    fn parse(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn propositional_pair() {
        let r = interpolate(
            &parse("p & q"),
            &parse("p | r"),
            &InterpolationOptions::default(),
        )
        .unwrap();
        assert_eq!(print_formula(&r.interpolant), "p");
        assert!(r.verified(), "{:?}", r.verification);
    }

    #[test]
    fn false_premise() {
        let r = interpolate(
            &parse("false"),
            &parse("q(a)"),
            &InterpolationOptions::default(),
        )
        .unwrap();
        assert_eq!(r.interpolant, Formula::False);
        assert!(r.verified());
    }

    #[test]
    fn valid_conclusion() {
        let r = interpolate(
            &parse("p"),
            &parse("true"),
            &InterpolationOptions::default(),
        )
        .unwrap();
        assert_eq!(r.interpolant, Formula::True);
    }

    #[test]
    fn items_example_end_to_end() {
        let f = parse("all X1. all X2. p(X1, h(f1(X1)), X2)");
        let g = parse("ex X1. ex X2. (p(h(g2(X1)), X2, g1) & p(g1, X1, h(g2(X1))))");
        let r = interpolate(&f, &g, &InterpolationOptions::default()).unwrap();
        assert!(
            r.verified(),
            "{} {:?} {:?}",
            print_formula(&r.interpolant),
            r.verification,
            r.notes
        );
    }

    #[test]
    fn quantified_universal() {
        let f = parse("all X. p(X)");
        let g = parse("p(a)");
        let r = interpolate(&f, &g, &InterpolationOptions::default()).unwrap();
        assert!(r.verified(), "{:?}", r.verification);
    }

    #[test]
    fn both_provers_agree_on_validity() {
        let f = parse("all X. (~p(X) | q(X)) & p(a)");
        let g = parse("q(a) | r(a)");
        for prover in [ProverKind::Connection, ProverKind::Hyper] {
            let opts = InterpolationOptions {
                prover,
                ..Default::default()
            };
            let r = interpolate(&f, &g, &opts).unwrap();
            assert!(r.verified(), "{prover:?}");
        }
    }

    #[test]
    fn horn_example() {
        let f = parse("all X. (~p(X) | q(X)) & p(a)");
        let g = parse("q(a) | r(a)");
        let r = interpolate_horn(&f, &g, &InterpolationOptions::default()).unwrap();
        assert!(r.interpolant.is_horn());
        assert!(r.verified(), "{:?} {:?}", r.verification, r.notes);
    }

    #[test]
    fn horn_rejects_non_horn() {
        let e = interpolate_horn(
            &parse("p | q"),
            &parse("p | q"),
            &InterpolationOptions::default(),
        );
        assert!(matches!(e, Err(InterpolationError::NotHorn)));
    }

    #[test]
    fn horn_unit() {
        let r =
            interpolate_horn(&parse("p"), &parse("p"), &InterpolationOptions::default()).unwrap();
        assert_eq!(print_formula(&r.interpolant), "p");
    }

    #[test]
    fn cnf_distribution() {
        let f = parse("(p & ~q) | r");
        assert_eq!(print_formula(&ground_cnf(&f)), "(p | r) & (~q | r)");
        assert_eq!(ground_cnf(&parse("p | ~p")), Formula::True);
    }

    #[test]
    fn equality_encoding() {
        let f = parse("~eq(r(a), r(b))");
        let g = parse("~eq(a, b)");
        let opts = InterpolationOptions {
            equality: true,
            ..Default::default()
        };
        let r = interpolate(&f, &g, &opts).unwrap();
        assert!(
            r.verified(),
            "{} {:?}",
            print_formula(&r.interpolant),
            r.verification
        );
    }
}
