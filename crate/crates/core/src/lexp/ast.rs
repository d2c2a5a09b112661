use std::fmt;

use num_traits::Zero;

use crate::numeric::Rational;

/// Terms of the language of ordered exponential rings. `Exp` is base 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Const(Rational),
    Var(String),
    Add(Box<Term>, Box<Term>),
    Sub(Box<Term>, Box<Term>),
    Mul(Box<Term>, Box<Term>),
    Neg(Box<Term>),
    Exp(Box<Term>),
    Sqrt(Box<Term>),
}

impl Term {
    pub fn constant(q: Rational) -> Self {
        Term::Const(q)
    }

    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn is_zero_const(&self) -> bool {
        matches!(self, Term::Const(q) if q.is_zero())
    }

    /// True when no `exp` or `sqrt` occurs, so rational inputs evaluate exactly.
    pub fn is_polynomial(&self) -> bool {
        match self {
            Term::Const(_) | Term::Var(_) => true,
            Term::Add(a, b) | Term::Sub(a, b) | Term::Mul(a, b) => a.is_polynomial() && b.is_polynomial(),
            Term::Neg(a) => a.is_polynomial(),
            Term::Exp(_) | Term::Sqrt(_) => false,
        }
    }

    pub fn visit_vars<'a>(&'a self, f: &mut impl FnMut(&'a str)) {
        match self {
            Term::Const(_) => {}
            Term::Var(v) => f(v),
            Term::Add(a, b) | Term::Sub(a, b) | Term::Mul(a, b) => {
                a.visit_vars(f);
                b.visit_vars(f);
            }
            Term::Neg(a) | Term::Exp(a) | Term::Sqrt(a) => a.visit_vars(f),
        }
    }

    fn level(&self) -> u8 {
        match self {
            Term::Add(..) | Term::Sub(..) => 1,
            Term::Mul(..) => 2,
            _ => 3,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.level() < min {
            write!(f, "(")?;
            self.fmt_at(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Term::Const(q) => write!(f, "{q}"),
            Term::Var(v) => write!(f, "{v}"),
            Term::Add(a, b) => {
                a.fmt_at(f, 1)?;
                write!(f, " + ")?;
                b.fmt_at(f, 2)
            }
            Term::Sub(a, b) => {
                a.fmt_at(f, 1)?;
                write!(f, " - ")?;
                b.fmt_at(f, 2)
            }
            Term::Mul(a, b) => {
                a.fmt_at(f, 2)?;
                write!(f, " * ")?;
                b.fmt_at(f, 3)
            }
            Term::Neg(a) => {
                write!(f, "-")?;
                // "-3" reads back as a negative literal, not as a negation
                if let Term::Const(q) = a.as_ref() {
                    write!(f, "({q})")
                } else {
                    a.fmt_at(f, 3)
                }
            }
            Term::Exp(a) => {
                write!(f, "exp(")?;
                a.fmt_at(f, 0)?;
                write!(f, ")")
            }
            Term::Sqrt(a) => {
                write!(f, "sqrt(")?;
                a.fmt_at(f, 0)?;
                write!(f, ")")
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}

/// Atomic statements after normalization: `t = 0` or `t > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Eq,
    Gt,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Literal {
    pub rel: Relation,
    pub term: Term,
}

impl Literal {
    pub fn eq(term: Term) -> Self {
        Literal { rel: Relation::Eq, term }
    }

    pub fn gt(term: Term) -> Self {
        Literal { rel: Relation::Gt, term }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.rel {
            Relation::Eq => "=",
            Relation::Gt => ">",
        };
        write!(f, "{} {op} 0", self.term)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(Literal),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn is_polynomial(&self) -> bool {
        match self {
            Formula::Atom(l) => l.term.is_polynomial(),
            Formula::Not(a) => a.is_polynomial(),
            Formula::And(a, b) | Formula::Or(a, b) => a.is_polynomial() && b.is_polynomial(),
        }
    }

    pub fn visit_vars<'a>(&'a self, f: &mut impl FnMut(&'a str)) {
        match self {
            Formula::Atom(l) => l.term.visit_vars(f),
            Formula::Not(a) => a.visit_vars(f),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.visit_vars(f);
                b.visit_vars(f);
            }
        }
    }

    fn level(&self) -> u8 {
        match self {
            Formula::Or(..) => 1,
            Formula::And(..) => 2,
            _ => 3,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.level() < min {
            write!(f, "(")?;
            self.fmt_at(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Formula::Atom(l) => write!(f, "{l}"),
            Formula::Not(a) => {
                write!(f, "not ")?;
                a.fmt_at(f, 3)
            }
            Formula::And(a, b) => {
                a.fmt_at(f, 2)?;
                write!(f, " and ")?;
                b.fmt_at(f, 3)
            }
            Formula::Or(a, b) => {
                a.fmt_at(f, 1)?;
                write!(f, " or ")?;
                b.fmt_at(f, 2)
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}

/// One disjunct of a negation-free normal form.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Conjunct {
    pub equalities: Vec<Term>,
    pub inequalities: Vec<Term>,
}

impl Conjunct {
    pub fn literals(&self) -> impl Iterator<Item = Literal> + '_ {
        let eqs = self.equalities.iter().cloned().map(Literal::eq);
        eqs.chain(self.inequalities.iter().cloned().map(Literal::gt))
    }

    pub fn is_polynomial(&self) -> bool {
        self.equalities.iter().chain(&self.inequalities).all(Term::is_polynomial)
    }
}

impl fmt::Display for Conjunct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.literals().map(|l| l.to_string()).collect();
        if parts.is_empty() {
            write!(f, "true")
        } else {
            write!(f, "{}", parts.join(" and "))
        }
    }
}

/// Disjunction of conjuncts, equivalent to the formula it came from.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Dnf {
    pub conjuncts: Vec<Conjunct>,
}

impl fmt::Display for Dnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.conjuncts.is_empty() {
            return write!(f, "false");
        }
        let parts: Vec<String> = self
            .conjuncts
            .iter()
            .map(|c| {
                if self.conjuncts.len() > 1 && c.equalities.len() + c.inequalities.len() > 1 {
                    format!("({c})")
                } else {
                    c.to_string()
                }
            })
            .collect();
        write!(f, "{}", parts.join(" or "))
    }
}

/// A prenex sentence `forall x.. exists y.. (matrix)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct A2Sentence {
    pub universals: Vec<String>,
    pub existentials: Vec<String>,
    pub matrix: Formula,
}

impl fmt::Display for A2Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.universals.is_empty() {
            write!(f, "forall {} ", self.universals.join(" "))?;
        }
        if !self.existentials.is_empty() {
            write!(f, "exists {} ", self.existentials.join(" "))?;
        }
        write!(f, "({})", self.matrix)
    }
}
