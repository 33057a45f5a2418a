use std::collections::BTreeMap;

use thiserror::Error;

use crate::logic::{Atom, Formula, Literal, Term};

/// Byte range in the source text.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{message} at {}..{}", span.start, span.end)]
pub struct ParseError {
    pub message: String,
    pub span: SourceSpan,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Lower(String),
    Upper(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Tilde,
    Amp,
    Bar,
    Arrow,
    DArrow,
    Eof,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(src: &'a str) -> Result<Vec<(Tok, SourceSpan)>, ParseError> {
        let mut lx = Lexer { src, pos: 0 };
        let mut out = Vec::new();
        loop {
            let t = lx.next()?;
            let eof = t.0 == Tok::Eof;
            out.push(t);
            if eof {
                return Ok(out);
            }
        }
    }

    fn next(&mut self) -> Result<(Tok, SourceSpan), ParseError> {
        let bytes = self.src.as_bytes();
        loop {
            while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
                self.pos += 1;
            }
            if self.pos < bytes.len() && bytes[self.pos] == b'%' {
                while self.pos < bytes.len() && bytes[self.pos] != b'\n' {
                    self.pos += 1;
                }
                continue;
            }
            break;
        }
        let start = self.pos;
        let span = |end| SourceSpan { start, end };
        if start >= bytes.len() {
            return Ok((Tok::Eof, span(start)));
        }
        let c = bytes[start];
        let single = |tok, this: &mut Self| {
            this.pos += 1;
            Ok((tok, span(start + 1)))
        };
        match c {
            b'(' => single(Tok::LParen, self),
            b')' => single(Tok::RParen, self),
            b',' => single(Tok::Comma, self),
            b'.' => single(Tok::Dot, self),
            b'~' => single(Tok::Tilde, self),
            b'&' => single(Tok::Amp, self),
            b'|' => single(Tok::Bar, self),
            b'-' if self.src[start..].starts_with("->") => {
                self.pos += 2;
                Ok((Tok::Arrow, span(start + 2)))
            }
            b'<' if self.src[start..].starts_with("<->") => {
                self.pos += 3;
                Ok((Tok::DArrow, span(start + 3)))
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let mut end = start + 1;
                while end < bytes.len()
                    && (bytes[end].is_ascii_alphanumeric() || bytes[end] == b'_')
                {
                    end += 1;
                }
                self.pos = end;
                let word = self.src[start..end].to_string();
                let tok = if c.is_ascii_uppercase() || c == b'_' {
                    Tok::Upper(word)
                } else {
                    Tok::Lower(word)
                };
                Ok((tok, span(end)))
            }
            _ => {
                let ch = self.src[start..].chars().next().unwrap();
                Err(ParseError {
                    message: format!("unexpected character '{ch}'"),
                    span: span(start + ch.len_utf8()),
                })
            }
        }
    }
}

struct Parser {
    toks: Vec<(Tok, SourceSpan)>,
    pos: usize,
    pred_arity: BTreeMap<String, usize>,
    fun_arity: BTreeMap<String, usize>,
}

/// Parses a formula. `->` and `<->` are expanded into `~`, `&` and `|`.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text)?;
    let f = p.formula()?;
    p.expect_eof()?;
    Ok(f)
}

/// Parses a single literal such as `~p(a, f(X))`.
pub fn parse_literal(text: &str) -> Result<Literal, ParseError> {
    let mut p = Parser::new(text)?;
    let start = p.span();
    let negated = if p.peek() == &Tok::Tilde {
        p.pos += 1;
        true
    } else {
        false
    };
    let atom = match p.unary()? {
        Formula::Atom(a) => a,
        _ => {
            return Err(ParseError {
                message: "expected a literal".into(),
                span: start,
            })
        }
    };
    p.expect_eof()?;
    Ok(Literal::new(!negated, atom))
}

/// Parses a term.
pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(text)?;
    let t = p.term()?;
    p.expect_eof()?;
    Ok(t)
}

impl Parser {
    fn new(text: &str) -> Result<Parser, ParseError> {
        Ok(Parser {
            toks: Lexer::tokens(text)?,
            pos: 0,
            pred_arity: BTreeMap::new(),
            fun_arity: BTreeMap::new(),
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> SourceSpan {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, SourceSpan) {
        let t = self.toks[self.pos].clone();
        if t.0 != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            message: message.into(),
            span: self.span(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {what}"))
        }
    }

    fn expect_eof(&self) -> Result<(), ParseError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            self.error("unexpected trailing input")
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.implication()?;
        while *self.peek() == Tok::DArrow {
            self.bump();
            let right = self.implication()?;
            left = Formula::iff(left, right);
        }
        Ok(left)
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let left = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let right = self.implication()?;
            return Ok(Formula::implies(left, right));
        }
        Ok(left)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut items = vec![self.conjunction()?];
        while *self.peek() == Tok::Bar {
            self.bump();
            items.push(self.conjunction()?);
        }
        Ok(Formula::or(items))
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut items = vec![self.unary()?];
        while *self.peek() == Tok::Amp {
            self.bump();
            items.push(self.unary()?);
        }
        Ok(Formula::and(items))
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Tilde => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(f)
            }
            Tok::Lower(w) if w == "all" || w == "ex" => {
                self.bump();
                let mut vars = Vec::new();
                loop {
                    match self.peek().clone() {
                        Tok::Upper(v) => {
                            self.bump();
                            vars.push(v);
                        }
                        Tok::Comma if !vars.is_empty() => {
                            self.bump();
                        }
                        Tok::Dot if !vars.is_empty() => {
                            self.bump();
                            break;
                        }
                        _ => return self.error("expected a variable or '.' in quantifier"),
                    }
                }
                let body = self.formula()?;
                Ok(if w == "all" {
                    Formula::forall(vars, body)
                } else {
                    Formula::exists(vars, body)
                })
            }
            Tok::Lower(w) if w == "true" => {
                self.bump();
                Ok(Formula::True)
            }
            Tok::Lower(w) if w == "false" => {
                self.bump();
                Ok(Formula::False)
            }
            Tok::Lower(name) => {
                let span = self.span();
                self.bump();
                let args = self.arguments()?;
                self.check_arity(true, &name, args.len(), span)?;
                Ok(Formula::Atom(Atom::new(name, args)))
            }
            Tok::Upper(_) => self.error("expected a formula but found a variable"),
            _ => self.error("expected a formula"),
        }
    }

    fn arguments(&mut self) -> Result<Vec<Term>, ParseError> {
        let mut args = Vec::new();
        if *self.peek() == Tok::LParen {
            self.bump();
            args.push(self.term()?);
            while *self.peek() == Tok::Comma {
                self.bump();
                args.push(self.term()?);
            }
            self.expect(Tok::RParen, "')'")?;
        }
        Ok(args)
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek().clone() {
            Tok::Upper(v) => {
                self.bump();
                Ok(Term::Var(v))
            }
            Tok::Lower(name) if name != "all" && name != "ex" => {
                let span = self.span();
                self.bump();
                let args = self.arguments()?;
                self.check_arity(false, &name, args.len(), span)?;
                Ok(Term::App(name, args))
            }
            _ => self.error("expected a term"),
        }
    }

    fn check_arity(
        &mut self,
        pred: bool,
        name: &str,
        arity: usize,
        span: SourceSpan,
    ) -> Result<(), ParseError> {
        let map = if pred {
            &mut self.pred_arity
        } else {
            &mut self.fun_arity
        };
        match map.get(name) {
            Some(&n) if n != arity => Err(ParseError {
                message: format!(
                    "{} '{name}' used with arity {arity} but earlier with arity {n}",
                    if pred { "predicate" } else { "function" }
                ),
                span,
            }),
            Some(_) => Ok(()),
            None => {
                map.insert(name.to_string(), arity);
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: &str) -> Term {
        Term::var(n)
    }

    #[test]
    fn precedence_and_quantifier_scope() {
        let f = parse_formula("all X. p(X) | q(X) & r").unwrap();
        let expected = Formula::Forall(
            "X".into(),
            Box::new(Formula::or([
                Formula::atom("p", vec![v("X")]),
                Formula::and([Formula::atom("q", vec![v("X")]), Formula::atom("r", vec![])]),
            ])),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn implication_is_right_associative_sugar() {
        let f = parse_formula("p -> q -> r").unwrap();
        let p = Formula::atom("p", vec![]);
        let q = Formula::atom("q", vec![]);
        let r = Formula::atom("r", vec![]);
        assert_eq!(f, Formula::or([Formula::not(p), Formula::not(q), r]));
    }

    #[test]
    fn arity_mismatch_reports_span() {
        let err = parse_formula("p(X) & p(X,Y)").unwrap_err();
        assert!(err.message.contains("arity"));
        assert_eq!(err.span, SourceSpan { start: 7, end: 8 });
    }

    #[test]
    fn multiple_binders_and_comments() {
        let f = parse_formula("% comment\nex X, Y. r(X,Y)").unwrap();
        assert_eq!(
            f,
            Formula::exists(
                ["X".to_string(), "Y".to_string()],
                Formula::atom("r", vec![v("X"), v("Y")])
            )
        );
    }

    #[test]
    fn literal_parsing() {
        let l = parse_literal("~p(a, f(X))").unwrap();
        assert!(!l.positive);
        assert_eq!(l.atom.args.len(), 2);
        assert!(parse_literal("p & q").is_err());
    }

    #[test]
    fn errors_on_garbage() {
        assert!(parse_formula("p(").is_err());
        assert!(parse_formula("X").is_err());
        assert!(parse_formula("p $ q").is_err());
        assert!(parse_formula("all . p").is_err());
    }
}
