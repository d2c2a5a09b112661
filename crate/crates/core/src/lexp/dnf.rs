use super::ast::{Conjunct, Dnf, Formula, Literal, Relation, Term};
use crate::error::{Error, Result};

pub const DEFAULT_DNF_CAP: usize = 4096;

/// Negation-free disjunctive normal form.
///
/// Negated atoms are rewritten with `not (t = 0) -> t > 0 or -t > 0` and
/// `not (t > 0) -> t = 0 or -t > 0`; disjunctions are concatenated and
/// conjunctions distributed in left-to-right order.
pub fn to_dnf(f: &Formula, cap: usize) -> Result<Dnf> {
    let conjuncts = go(f, false, cap)?;
    Ok(Dnf { conjuncts })
}

fn single(l: Literal) -> Vec<Conjunct> {
    let mut c = Conjunct::default();
    match l.rel {
        Relation::Eq => c.equalities.push(l.term),
        Relation::Gt => c.inequalities.push(l.term),
    }
    vec![c]
}

fn go(f: &Formula, negated: bool, cap: usize) -> Result<Vec<Conjunct>> {
    let out = match (f, negated) {
        (Formula::Atom(l), false) => single(l.clone()),
        (Formula::Atom(l), true) => {
            let minus = Term::Neg(Box::new(l.term.clone()));
            let first = match l.rel {
                Relation::Eq => Literal::gt(l.term.clone()),
                Relation::Gt => Literal::eq(l.term.clone()),
            };
            let mut v = single(first);
            v.extend(single(Literal::gt(minus)));
            v
        }
        (Formula::Not(a), n) => go(a, !n, cap)?,
        (Formula::Or(a, b), false) | (Formula::And(a, b), true) => {
            let mut left = go(a, negated, cap)?;
            let right = go(b, negated, cap)?;
            if left.len() + right.len() > cap {
                return Err(Error::BlowupCap { cap });
            }
            left.extend(right);
            left
        }
        (Formula::And(a, b), false) | (Formula::Or(a, b), true) => {
            let left = go(a, negated, cap)?;
            let right = go(b, negated, cap)?;
            if left.len().saturating_mul(right.len()) > cap {
                return Err(Error::BlowupCap { cap });
            }
            let mut v = Vec::with_capacity(left.len() * right.len());
            for l in &left {
                for r in &right {
                    let mut c = l.clone();
                    c.equalities.extend(r.equalities.iter().cloned());
                    c.inequalities.extend(r.inequalities.iter().cloned());
                    v.push(c);
                }
            }
            v
        }
    };
    if out.len() > cap {
        return Err(Error::BlowupCap { cap });
    }
    Ok(out)
}
