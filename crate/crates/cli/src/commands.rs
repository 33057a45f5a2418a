use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use tabipol_core::access::{
    access_interpolate, check_aci, verify_access, AccessError, AccessOptions, AciContext,
};
use tabipol_core::clausify::{
    clausify, definitional_clausify_rqfo, negate_rqfo, to_rqfo, Clausifier,
};
use tabipol_core::craig::{
    interpolate, interpolate_horn, verify_craig_lyndon, Grounding, InterpolationError,
    InterpolationOptions, InterpolationResult,
};
use tabipol_core::logic::{Formula, FreshNames, Literal};
use tabipol_core::prover::{
    prove, ClauseSet, Exhausted, ProofBudget, ProverKind, RENAME_THRESHOLD,
};
use tabipol_core::syntax::{
    parse_formula, parse_literal, parse_tableau, parse_term, print_tableau, render_tableau,
};
use tabipol_core::tableau::{
    ground_tableau, negative_labels, GroundingStrategy, PosSide, Side, SidePolicy,
};
use tabipol_core::transform::{
    make_contiguous, make_leaf_only, remove_irregularities, remove_uneagerness, to_aci,
    TransformTrace,
};
use tabipol_core::Tableau;

use crate::{
    BudgetFlags, Command, CraigFlags, DefSide, Format, Procedure, Prover, RunFlags, SidePref,
    VerifyKind,
};

pub const SUCCESS: u8 = 0;
pub const VERIFICATION_FAILED: u8 = 1;
pub const NO_PROOF: u8 = 2;
pub const INPUT_ERROR: u8 = 3;

/// Exit code for an error: proof search failures are distinguished from
/// everything else, which is blamed on the input.
pub fn exit_code(e: &anyhow::Error) -> u8 {
    let no_proof = e.chain().any(|c| {
        c.is::<Exhausted>()
            || matches!(
                c.downcast_ref::<InterpolationError>(),
                Some(InterpolationError::NoProof(_))
            )
            || matches!(
                c.downcast_ref::<AccessError>(),
                Some(AccessError::NoProof(_))
            )
    });
    if no_proof {
        NO_PROOF
    } else {
        INPUT_ERROR
    }
}

pub fn run(command: Command, out: &mut impl Write) -> Result<u8> {
    match command {
        Command::Prove {
            premise,
            conclusion,
            definitional,
            run,
        } => prove_cmd(&premise, conclusion.as_deref(), definitional, &run, out),
        Command::Clausify {
            input,
            definitional,
        } => clausify_cmd(&input, definitional, out),
        Command::Interpolate {
            premise,
            conclusion,
            run,
            craig,
        } => craig_cmd(&premise, &conclusion, &run, &craig, false, out),
        Command::InterpolateHorn {
            premise,
            conclusion,
            run,
            craig,
        } => craig_cmd(&premise, &conclusion, &run, &craig, true, out),
        Command::AccessInterpolate {
            premise,
            conclusion,
            run,
        } => access_cmd(&premise, &conclusion, &run, out),
        Command::Transform {
            procedure,
            tableau,
            premise,
            conclusion,
            literals,
            pairs,
            trace,
            format,
        } => {
            let ctx = match (premise, conclusion) {
                (Some(f), Some(g)) => {
                    Some(AciContext::new(&read_formula(&f)?, &read_formula(&g)?)?)
                }
                (None, None) => None,
                _ => bail!("--premise and --conclusion must be given together"),
            };
            let request = TransformRequest {
                procedure,
                ctx,
                literals,
                pairs,
                trace,
                format,
            };
            transform_cmd(&tableau, &request, out)
        }
        Command::Verify {
            kind,
            premise,
            conclusion,
            candidate,
            budget,
        } => verify_cmd(kind, &premise, &conclusion, &candidate, &budget, out),
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn read_formula(path: &Path) -> Result<Formula> {
    parse_formula(&read_text(path)?).with_context(|| format!("cannot parse {}", path.display()))
}

fn read_tableau(path: &Path) -> Result<Tableau> {
    parse_tableau(&read_text(path)?).with_context(|| format!("cannot parse {}", path.display()))
}

fn budget(flags: &BudgetFlags) -> Result<ProofBudget> {
    let b = ProofBudget {
        max_depth: flags.max_depth,
        max_inferences: flags.max_inferences,
        timeout_ms: flags.timeout_ms,
    };
    b.validate().map_err(|e| anyhow!(e))?;
    Ok(b)
}

fn prover_kind(p: Option<Prover>, default: ProverKind) -> ProverKind {
    match p {
        Some(Prover::Connection) => ProverKind::Connection,
        Some(Prover::Hyper) => ProverKind::Hyper,
        None => default,
    }
}

fn write_tableau(t: &Tableau, format: Format, out: &mut impl Write) -> Result<()> {
    match format {
        Format::Text => write!(out, "{}", render_tableau(t))?,
        Format::Tree => writeln!(out, "{}", print_tableau(t))?,
    }
    Ok(())
}

fn prove_cmd(
    premise: &Path,
    conclusion: Option<&Path>,
    definitional: bool,
    run: &RunFlags,
    out: &mut impl Write,
) -> Result<u8> {
    let f = read_formula(premise)?;
    let budget = budget(&run.budget)?;
    let kind = prover_kind(run.prover, ProverKind::Connection);
    let (proof, funs) = match (conclusion, definitional) {
        (Some(c), true) => {
            let ctx = AciContext::new(&f, &read_formula(c)?)?;
            let raw = prove(kind, &ClauseSet::two_sided(&ctx.red, &ctx.blue), &budget)?;
            let funs: BTreeSet<String> =
                ctx.red.funs().into_iter().chain(ctx.blue.funs()).collect();
            (ctx.annotate(&raw)?, funs)
        }
        (None, true) => bail!("--definitional needs a premise and a conclusion"),
        (Some(c), false) => {
            let g = read_formula(c)?;
            let mut clausifier = Clausifier::for_formulas([&f, &g]).with_renaming(RENAME_THRESHOLD);
            let red = clausifier.clausify(&f)?.with_side(Side::Red);
            let blue = clausifier.clausify(&Formula::not(g))?.with_side(Side::Blue);
            let funs = red.funs().into_iter().chain(blue.funs()).collect();
            (
                prove(kind, &ClauseSet::two_sided(&red, &blue), &budget)?,
                funs,
            )
        }
        (None, false) => {
            let form = Clausifier::for_formulas([&f])
                .with_renaming(RENAME_THRESHOLD)
                .clausify(&f)?;
            (
                prove(kind, &ClauseSet::from_form(&form), &budget)?,
                form.funs(),
            )
        }
    };
    let k = FreshNames::avoiding(funs).fresh_like("k");
    write_tableau(
        &ground_tableau(&proof, &GroundingStrategy::Uniform(k)),
        run.format,
        out,
    )?;
    Ok(SUCCESS)
}

fn clausify_cmd(input: &Path, definitional: Option<DefSide>, out: &mut impl Write) -> Result<u8> {
    let f = read_formula(input)?;
    let Some(side) = definitional else {
        for c in clausify(&f)?.clauses {
            writeln!(out, "{c}")?;
        }
        return Ok(SUCCESS);
    };
    // Side R stands for a conclusion, so its clauses are those of the negation.
    let rq = to_rqfo(&f)?;
    let form = match side {
        DefSide::L => definitional_clausify_rqfo(&rq, PosSide::L)?,
        DefSide::R => definitional_clausify_rqfo(&negate_rqfo(&rq)?, PosSide::R)?,
    };
    for (c, meta) in form.clauses.iter().zip(&form.meta) {
        match meta {
            Some(m) => writeln!(out, "{c}    % form {} at {}", m.form.number(), m.pos)?,
            None => writeln!(out, "{c}")?,
        }
    }
    Ok(SUCCESS)
}

fn craig_options(run: &RunFlags, craig: &CraigFlags) -> Result<InterpolationOptions> {
    let grounding = if craig.grounding.is_empty() {
        Grounding::Uniform
    } else {
        let mut map = BTreeMap::new();
        for binding in &craig.grounding {
            let (var, term) = binding
                .split_once('=')
                .ok_or_else(|| anyhow!("--ground expects VAR=term, got {binding:?}"))?;
            let term = parse_term(term.trim())
                .with_context(|| format!("bad term in --ground {binding:?}"))?;
            map.insert(var.trim().to_string(), term);
        }
        Grounding::PerVariable(map)
    };
    Ok(InterpolationOptions {
        prover: prover_kind(run.prover, ProverKind::Connection),
        budget: budget(&run.budget)?,
        grounding,
        side_policy: match craig.side_policy {
            SidePref::Red => SidePolicy::PreferRed,
            SidePref::Blue => SidePolicy::PreferBlue,
        },
        k_in_red: craig.k_in_red,
        equality: craig.equality,
        verify: !run.no_verify,
    })
}

fn craig_cmd(
    premise: &Path,
    conclusion: &Path,
    run: &RunFlags,
    craig: &CraigFlags,
    horn: bool,
    out: &mut impl Write,
) -> Result<u8> {
    let (f, g) = (read_formula(premise)?, read_formula(conclusion)?);
    let opts = craig_options(run, craig)?;
    let r: InterpolationResult = if horn {
        interpolate_horn(&f, &g, &opts)?
    } else {
        interpolate(&f, &g, &opts)?
    };
    writeln!(out, "{}", r.interpolant)?;
    if run.show_proof {
        write_tableau(&r.tableau, run.format, out)?;
    }
    for note in &r.notes {
        eprintln!("note: {note}");
    }
    match &r.verification {
        Some(report) => {
            writeln!(out, "{report}")?;
            Ok(if r.verified() {
                SUCCESS
            } else {
                VERIFICATION_FAILED
            })
        }
        None => Ok(SUCCESS),
    }
}

fn access_cmd(
    premise: &Path,
    conclusion: &Path,
    run: &RunFlags,
    out: &mut impl Write,
) -> Result<u8> {
    let (f, g) = (read_formula(premise)?, read_formula(conclusion)?);
    let opts = AccessOptions {
        prover: prover_kind(run.prover, ProverKind::Hyper),
        budget: budget(&run.budget)?,
        verify: !run.no_verify,
    };
    let r = access_interpolate(&f, &g, &opts)?;
    writeln!(out, "{}", r.interpolant)?;
    if run.show_proof {
        write_tableau(&r.tableau, run.format, out)?;
    }
    for note in &r.notes {
        eprintln!("note: {note}");
    }
    match &r.verification {
        Some(report) => {
            writeln!(out, "{report}")?;
            Ok(if r.verified() {
                SUCCESS
            } else {
                VERIFICATION_FAILED
            })
        }
        None => Ok(SUCCESS),
    }
}

struct TransformRequest {
    procedure: Procedure,
    ctx: Option<AciContext>,
    literals: Vec<String>,
    pairs: Vec<String>,
    trace: bool,
    format: Format,
}

fn parse_lit(text: &str) -> Result<Literal> {
    parse_literal(text.trim()).with_context(|| format!("cannot parse literal {text:?}"))
}

fn transform_cmd(path: &Path, req: &TransformRequest, out: &mut impl Write) -> Result<u8> {
    let input = read_tableau(path)?;
    let t = match &req.ctx {
        Some(ctx) => ctx.annotate(&input)?,
        None => input,
    };
    let mut trace = TransformTrace::default();
    let result = match req.procedure {
        Procedure::Eager => remove_uneagerness(&t, &mut trace),
        Procedure::Regular => remove_irregularities(&t, &mut trace),
        Procedure::LeafOnly => {
            let set: BTreeSet<Literal> = if req.literals.is_empty() {
                negative_labels(&t)
            } else {
                req.literals
                    .iter()
                    .map(|l| parse_lit(l))
                    .collect::<Result<_>>()?
            };
            make_leaf_only(&t, &set, &mut trace)?
        }
        Procedure::Contiguous => {
            let pairs = if !req.pairs.is_empty() {
                req.pairs
                    .iter()
                    .map(|p| {
                        let (a, b) = p
                            .split_once(';')
                            .ok_or_else(|| anyhow!("--pair expects L1;L2, got {p:?}"))?;
                        Ok((parse_lit(a)?, parse_lit(b)?))
                    })
                    .collect::<Result<Vec<_>>>()?
            } else if let Some(ctx) = &req.ctx {
                ctx.contiguity_pairs(&t)
            } else {
                bail!("contiguous needs --pair or --premise/--conclusion");
            };
            make_contiguous(&t, &pairs, &mut trace)?
        }
        Procedure::ToAci => {
            let ctx = req
                .ctx
                .as_ref()
                .ok_or_else(|| anyhow!("to-aci needs --premise and --conclusion"))?;
            let out = to_aci(&t, ctx, &mut trace)?;
            let diag = check_aci(&out, ctx);
            if !diag.passed() {
                bail!("result is not an ACI tableau:\n{diag}");
            }
            out
        }
    };
    write_tableau(&result, req.format, out)?;
    if req.trace {
        writeln!(out, "--- trace")?;
        write!(out, "{trace}")?;
    }
    Ok(SUCCESS)
}

fn verify_cmd(
    kind: VerifyKind,
    premise: &Path,
    conclusion: &Path,
    candidate: &Path,
    flags: &BudgetFlags,
    out: &mut impl Write,
) -> Result<u8> {
    let (f, g, h) = (
        read_formula(premise)?,
        read_formula(conclusion)?,
        read_formula(candidate)?,
    );
    let budget = budget(flags)?;
    let passed = match kind {
        VerifyKind::CraigLyndon => {
            let report = verify_craig_lyndon(&f, &g, &h, &budget);
            writeln!(out, "{report}")?;
            report.passed()
        }
        VerifyKind::Access => {
            let report = verify_access(&f, &g, &h, &budget);
            writeln!(out, "{report}")?;
            report.passed()
        }
    };
    Ok(if passed { SUCCESS } else { VERIFICATION_FAILED })
}
