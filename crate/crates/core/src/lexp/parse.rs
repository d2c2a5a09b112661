//! Recursive-descent parser for terms, formulas and A2 sentences.
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := factor (('*' | '·') factor)*
//! factor   := '-' factor | 'exp' '(' expr ')' | 'sqrt' '(' expr ')'
//!           | '(' expr ')' | rational | variable
//! rational := integer ['/' positive-integer]
//! formula  := conj ('or' conj)*
//! conj     := neg ('and' neg)*
//! neg      := 'not' neg | '(' formula ')' | expr ('=' | '>' | '<') expr
//! sentence := ['forall' vars] ['exists' vars] '(' formula ')'
//! ```

use std::collections::HashSet;

use num_traits::Zero;

use super::ast::{A2Sentence, Formula, Literal, Term};
use crate::error::{Error, Result};
use crate::numeric::{Int, Rational};

const KEYWORDS: [&str; 7] = ["exp", "sqrt", "forall", "exists", "and", "or", "not"];

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Num(Int),
    Ident(String),
    Sym(char),
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>> {
    let mut out = Vec::new();
    let mut it = src.char_indices().peekable();
    while let Some(&(pos, c)) = it.peek() {
        if c.is_whitespace() {
            it.next();
        } else if c.is_ascii_digit() {
            let mut end = pos;
            while let Some(&(p, d)) = it.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                end = p + d.len_utf8();
                it.next();
            }
            let n: Int = src[pos..end].parse().expect("digits parse as an integer");
            out.push((Tok::Num(n), pos));
        } else if c.is_alphabetic() || c == '_' {
            let mut end = pos;
            while let Some(&(p, d)) = it.peek() {
                if !(d.is_alphanumeric() || d == '_') {
                    break;
                }
                end = p + d.len_utf8();
                it.next();
            }
            out.push((Tok::Ident(src[pos..end].to_string()), pos));
        } else if "+-*·/()=<>,".contains(c) {
            let c = if c == '·' { '*' } else { c };
            out.push((Tok::Sym(c), pos));
            it.next();
        } else {
            return Err(Error::Syntax { pos, msg: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Self> {
        Ok(Parser { toks: lex(src)?, at: 0, end: src.len() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(_, p)| *p)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let msg = match self.peek() {
            None => format!("{} (found end of input)", msg.into()),
            Some(_) => msg.into(),
        };
        Err(Error::Syntax { pos: self.pos(), msg })
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<()> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Ident(s)) if s == kw) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn finish(&self) -> Result<()> {
        if self.at < self.toks.len() {
            self.err("unexpected trailing input")
        } else {
            Ok(())
        }
    }

    fn expr(&mut self) -> Result<Term> {
        let mut lhs = self.term()?;
        loop {
            if self.eat_sym('+') {
                lhs = Term::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat_sym('-') {
                lhs = Term::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Term> {
        let mut lhs = self.factor()?;
        while self.eat_sym('*') {
            lhs = Term::Mul(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Term> {
        match self.peek().cloned() {
            Some(Tok::Sym('-')) => {
                self.at += 1;
                if let Some(Tok::Num(_)) = self.peek() {
                    return Ok(Term::Const(-self.rational()?));
                }
                Ok(Term::Neg(Box::new(self.factor()?)))
            }
            Some(Tok::Sym('(')) => {
                self.at += 1;
                let t = self.expr()?;
                self.expect_sym(')')?;
                Ok(t)
            }
            Some(Tok::Num(_)) => Ok(Term::Const(self.rational()?)),
            Some(Tok::Ident(name)) if name == "exp" || name == "sqrt" => {
                self.at += 1;
                self.expect_sym('(')?;
                let arg = Box::new(self.expr()?);
                self.expect_sym(')')?;
                Ok(if name == "exp" { Term::Exp(arg) } else { Term::Sqrt(arg) })
            }
            Some(Tok::Ident(name)) if !KEYWORDS.contains(&name.as_str()) => {
                self.at += 1;
                Ok(Term::Var(name))
            }
            _ => self.err("expected a number, variable, `exp`, `sqrt` or `(`"),
        }
    }

    fn rational(&mut self) -> Result<Rational> {
        let Some(Tok::Num(n)) = self.peek().cloned() else {
            return self.err("expected an integer");
        };
        self.at += 1;
        if !self.eat_sym('/') {
            return Ok(Rational::from_integer(n));
        }
        match self.peek().cloned() {
            Some(Tok::Num(d)) if !d.is_zero() => {
                self.at += 1;
                Ok(Rational::new(n, d))
            }
            Some(Tok::Num(_)) => self.err("denominator must be positive"),
            _ => self.err("expected a positive integer denominator"),
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        let mut lhs = self.conj()?;
        while self.eat_keyword("or") {
            lhs = Formula::Or(Box::new(lhs), Box::new(self.conj()?));
        }
        Ok(lhs)
    }

    fn conj(&mut self) -> Result<Formula> {
        let mut lhs = self.neg()?;
        while self.eat_keyword("and") {
            lhs = Formula::And(Box::new(lhs), Box::new(self.neg()?));
        }
        Ok(lhs)
    }

    fn neg(&mut self) -> Result<Formula> {
        if self.eat_keyword("not") {
            return Ok(Formula::Not(Box::new(self.neg()?)));
        }
        if self.peek() == Some(&Tok::Sym('(')) {
            let save = self.at;
            self.at += 1;
            let grouped = self.formula().and_then(|f| self.expect_sym(')').map(|_| f));
            match grouped {
                Ok(f) => return Ok(f),
                Err(first) => {
                    self.at = save;
                    return self.literal().map(Formula::Atom).map_err(|second| later(first, second));
                }
            }
        }
        self.literal().map(Formula::Atom)
    }

    fn literal(&mut self) -> Result<Literal> {
        let lhs = self.expr()?;
        let rel = match self.peek() {
            Some(Tok::Sym(c @ ('=' | '>' | '<'))) => *c,
            _ => return self.err("expected `=`, `>` or `<`"),
        };
        self.at += 1;
        let rhs = self.expr()?;
        Ok(match rel {
            '=' => Literal::eq(difference(lhs, rhs)),
            '>' => Literal::gt(difference(lhs, rhs)),
            _ => Literal::gt(difference(rhs, lhs)),
        })
    }

    fn var_list(&mut self) -> Result<Vec<String>> {
        let mut vars = Vec::new();
        while let Some(Tok::Ident(name)) = self.peek().cloned() {
            if KEYWORDS.contains(&name.as_str()) {
                break;
            }
            self.at += 1;
            vars.push(name);
            self.eat_sym(',');
        }
        if vars.is_empty() {
            return self.err("expected a variable name");
        }
        Ok(vars)
    }

    fn sentence(&mut self) -> Result<A2Sentence> {
        let universals = if self.eat_keyword("forall") { self.var_list()? } else { Vec::new() };
        let existentials = if self.eat_keyword("exists") { self.var_list()? } else { Vec::new() };
        self.expect_sym('(')?;
        let matrix = self.formula()?;
        self.expect_sym(')')?;
        self.finish()?;
        Ok(A2Sentence { universals, existentials, matrix })
    }
}

fn later(a: Error, b: Error) -> Error {
    match (&a, &b) {
        (Error::Syntax { pos: pa, .. }, Error::Syntax { pos: pb, .. }) if pa > pb => a,
        _ => b,
    }
}

fn difference(lhs: Term, rhs: Term) -> Term {
    if rhs.is_zero_const() {
        lhs
    } else {
        Term::Sub(Box::new(lhs), Box::new(rhs))
    }
}

/// Parses a term; any identifier that is not a keyword is a variable.
pub fn parse_term(src: &str) -> Result<Term> {
    let mut p = Parser::new(src)?;
    let t = p.expr()?;
    p.finish()?;
    Ok(t)
}

/// Parses a term whose variables must all be in `vars`.
pub fn parse_term_in(src: &str, vars: &[&str]) -> Result<Term> {
    let t = parse_term(src)?;
    let mut unbound = None;
    t.visit_vars(&mut |v| {
        if unbound.is_none() && !vars.contains(&v) {
            unbound = Some(v.to_string());
        }
    });
    match unbound {
        Some(v) => Err(Error::UnboundVariable(v)),
        None => Ok(t),
    }
}

/// Parses a quantifier-free formula.
pub fn parse_formula(src: &str) -> Result<Formula> {
    let mut p = Parser::new(src)?;
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

/// Parses `forall .. exists .. (formula)` and checks variable scoping.
pub fn parse_sentence(src: &str) -> Result<A2Sentence> {
    let s = Parser::new(src)?.sentence()?;
    let mut seen = HashSet::new();
    for v in s.universals.iter().chain(&s.existentials) {
        if !seen.insert(v.as_str()) {
            return Err(Error::DuplicateVariable(v.clone()));
        }
    }
    let mut unbound = None;
    s.matrix.visit_vars(&mut |v| {
        if unbound.is_none() && !seen.contains(v) {
            unbound = Some(v.to_string());
        }
    });
    match unbound {
        Some(v) => Err(Error::UnboundVariable(v)),
        None => Ok(s),
    }
}
