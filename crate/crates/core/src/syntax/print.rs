use std::fmt::{self, Display, Formatter, Write};

use crate::logic::{Atom, Clause, Formula, Literal, Term};

impl Display for Term {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::App(name, args) => {
                f.write_str(name)?;
                write_args(f, args)
            }
        }
    }
}

fn write_args(f: &mut Formatter<'_>, args: &[Term]) -> fmt::Result {
    if args.is_empty() {
        return Ok(());
    }
    f.write_char('(')?;
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            f.write_char(',')?;
        }
        write!(f, "{a}")?;
    }
    f.write_char(')')
}

impl Display for Atom {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pred)?;
        write_args(f, &self.args)
    }
}

impl Display for Literal {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        if !self.positive {
            f.write_char('~')?;
        }
        write!(f, "{}", self.atom)
    }
}

impl Display for Clause {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        if self.literals.is_empty() {
            return f.write_str("false");
        }
        for (i, l) in self.literals.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Where a subformula is printed; decides which constructs need parentheses.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Ctx {
    Top,
    Not,
    AndOperand,
    OrOperand,
}

impl Display for Formula {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write_formula(f, self, Ctx::Top)
    }
}

fn is_quantifier(g: &Formula) -> bool {
    matches!(
        g,
        Formula::Forall(..)
            | Formula::Exists(..)
            | Formula::ForallRel { .. }
            | Formula::ExistsRel { .. }
    )
}

fn write_formula(f: &mut Formatter<'_>, g: &Formula, ctx: Ctx) -> fmt::Result {
    let parens = match g {
        Formula::And(items) if items.len() >= 2 => matches!(ctx, Ctx::Not | Ctx::AndOperand),
        Formula::Or(items) if items.len() >= 2 => ctx != Ctx::Top,
        _ if is_quantifier(g) => ctx != Ctx::Top,
        _ => false,
    };
    if parens {
        f.write_char('(')?;
    }
    match g {
        Formula::True => f.write_str("true")?,
        Formula::False => f.write_str("false")?,
        Formula::Atom(a) => write!(f, "{a}")?,
        Formula::Not(inner) => {
            f.write_char('~')?;
            write_formula(f, inner, Ctx::Not)?;
        }
        Formula::And(items) => write_nary(f, items, " & ", Ctx::AndOperand, "true")?,
        Formula::Or(items) => write_nary(f, items, " | ", Ctx::OrOperand, "false")?,
        Formula::Forall(..) | Formula::Exists(..) => {
            let (keyword, vars, body) = binder_run(g);
            write!(f, "{keyword} {}. ", vars.join(" "))?;
            write_body(f, body)?;
        }
        Formula::ForallRel { vars, guard, body } => {
            if !vars.is_empty() {
                write!(f, "all {}. ", vars.join(" "))?;
            }
            write!(f, "(~{guard} | ")?;
            write_formula(f, body, Ctx::OrOperand)?;
            f.write_char(')')?;
        }
        Formula::ExistsRel { vars, guard, body } => {
            if !vars.is_empty() {
                write!(f, "ex {}. ", vars.join(" "))?;
            }
            write!(f, "({guard} & ")?;
            write_formula(f, body, Ctx::AndOperand)?;
            f.write_char(')')?;
        }
    }
    if parens {
        f.write_char(')')?;
    }
    Ok(())
}

fn write_nary(
    f: &mut Formatter<'_>,
    items: &[Formula],
    sep: &str,
    ctx: Ctx,
    empty: &str,
) -> fmt::Result {
    match items {
        [] => f.write_str(empty),
        [single] => write_formula(f, single, ctx),
        _ => {
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    f.write_str(sep)?;
                }
                write_formula(f, item, ctx)?;
            }
            Ok(())
        }
    }
}

/// Collects a run of same-kind plain quantifiers.
fn binder_run(g: &Formula) -> (&'static str, Vec<&str>, &Formula) {
    let universal = matches!(g, Formula::Forall(..));
    let mut vars = Vec::new();
    let mut cur = g;
    loop {
        match cur {
            Formula::Forall(v, b) if universal => {
                vars.push(v.as_str());
                cur = b;
            }
            Formula::Exists(v, b) if !universal => {
                vars.push(v.as_str());
                cur = b;
            }
            _ => break,
        }
    }
    (if universal { "all" } else { "ex" }, vars, cur)
}

fn write_body(f: &mut Formatter<'_>, body: &Formula) -> fmt::Result {
    match body {
        Formula::And(items) | Formula::Or(items) if items.len() >= 2 => {
            f.write_char('(')?;
            write_formula(f, body, Ctx::Top)?;
            f.write_char(')')
        }
        _ => write_formula(f, body, Ctx::Top),
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse_formula;
    use super::*;

    #[test]
    fn prints_quantified_disjunction() {
        let f = Formula::Forall(
            "X".into(),
            Box::new(Formula::or([
                Formula::not(Formula::atom("r", vec![Term::var("X")])),
                Formula::atom("p", vec![Term::var("X")]),
            ])),
        );
        assert_eq!(f.to_string(), "all X. (~r(X) | p(X))");
    }

    #[test]
    fn minimal_parentheses() {
        for src in [
            "p & q | r",
            "(p | q) & r",
            "~(p & q)",
            "~~p",
            "(all X. p(X)) & q",
            "all X Y. ex Z. r(X,Y,Z)",
            "p(f(a,X)) | ~q",
            "true & ~false",
        ] {
            let f = parse_formula(src).unwrap();
            assert_eq!(f.to_string(), src);
        }
    }

    #[test]
    fn relativized_quantifiers_print_in_plain_syntax() {
        let f = Formula::ForallRel {
            vars: vec!["X".into()],
            guard: Atom::new("r", vec![Term::var("X")]),
            body: Box::new(Formula::ExistsRel {
                vars: vec!["Y".into()],
                guard: Atom::new("s", vec![Term::var("X"), Term::var("Y")]),
                body: Box::new(Formula::True),
            }),
        };
        assert_eq!(f.to_string(), "all X. (~r(X) | (ex Y. (s(X,Y) & true)))");
    }
}
