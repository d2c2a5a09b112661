use std::collections::HashMap;

use num_traits::{Signed, Zero};

use super::ast::{Conjunct, Dnf, Formula, Literal, Relation, Term};
use crate::creal::CauchyReal;
use crate::elem::{exp2, exp2_rat, sqrt_auto};
use crate::error::{Error, Result};
use crate::numeric::{isqrt, Int, Rational};

pub type RealEnv = HashMap<String, CauchyReal>;
pub type RatEnv = HashMap<String, Rational>;

/// Fuel spent looking for a positivity witness under `sqrt`.
pub const SQRT_FUEL: u32 = 64;

/// Evaluates a term to a computable real. Terms without `exp`/`sqrt` over
/// exact inputs stay exact.
pub fn eval_term(t: &Term, env: &RealEnv) -> Result<CauchyReal> {
    eval_with(t, &|v| env.get(v).cloned())
}

/// [`eval_term`] over a rational assignment.
pub fn eval_term_rat(t: &Term, env: &RatEnv) -> Result<CauchyReal> {
    eval_with(t, &|v| env.get(v).cloned().map(CauchyReal::from_rational))
}

fn eval_with(t: &Term, lookup: &impl Fn(&str) -> Option<CauchyReal>) -> Result<CauchyReal> {
    Ok(match t {
        Term::Const(q) => CauchyReal::from_rational(q.clone()),
        Term::Var(v) => lookup(v).ok_or_else(|| Error::UnboundVariable(v.clone()))?,
        Term::Add(a, b) => eval_with(a, lookup)?.add(&eval_with(b, lookup)?),
        Term::Sub(a, b) => eval_with(a, lookup)?.sub(&eval_with(b, lookup)?),
        Term::Mul(a, b) if a == b => eval_with(a, lookup)?.square(),
        Term::Mul(a, b) => eval_with(a, lookup)?.mul(&eval_with(b, lookup)?),
        Term::Neg(a) => eval_with(a, lookup)?.neg(),
        Term::Exp(a) => exp2(&eval_with(a, lookup)?),
        Term::Sqrt(a) => sqrt_auto(&eval_with(a, lookup)?, SQRT_FUEL)?,
    })
}

/// Exact value over a rational assignment, when one is available: always for
/// polynomial terms, and for `exp`/`sqrt` only when the result is rational.
pub fn eval_exact(t: &Term, env: &RatEnv) -> Option<Rational> {
    Some(match t {
        Term::Const(q) => q.clone(),
        Term::Var(v) => env.get(v)?.clone(),
        Term::Add(a, b) => eval_exact(a, env)? + eval_exact(b, env)?,
        Term::Sub(a, b) => eval_exact(a, env)? - eval_exact(b, env)?,
        Term::Mul(a, b) => eval_exact(a, env)? * eval_exact(b, env)?,
        Term::Neg(a) => -eval_exact(a, env)?,
        Term::Exp(a) => {
            let q = eval_exact(a, env)?;
            if !q.is_integer() || q.numer().magnitude().bits() > 16 {
                return None;
            }
            exp2_rat(q.numer(), 1).ok()?.exact()?.clone()
        }
        Term::Sqrt(a) => {
            let q = eval_exact(a, env)?;
            if q.is_negative() {
                return None;
            }
            let (p, d) = (q.numer().magnitude(), q.denom().magnitude());
            let (rp, rd) = (isqrt(p), isqrt(d));
            if &(&rp * &rp) != p || &(&rd * &rd) != d {
                return None;
            }
            Rational::new(Int::from(rp), Int::from(rd))
        }
    })
}

pub fn literal_holds_exact(l: &Literal, env: &RatEnv) -> Option<bool> {
    let v = eval_exact(&l.term, env)?;
    Some(match l.rel {
        Relation::Eq => v.is_zero(),
        Relation::Gt => v.is_positive(),
    })
}

/// Truth value of a formula under exact evaluation.
pub fn formula_holds_exact(f: &Formula, env: &RatEnv) -> Option<bool> {
    Some(match f {
        Formula::Atom(l) => literal_holds_exact(l, env)?,
        Formula::Not(a) => !formula_holds_exact(a, env)?,
        Formula::And(a, b) => formula_holds_exact(a, env)? && formula_holds_exact(b, env)?,
        Formula::Or(a, b) => formula_holds_exact(a, env)? || formula_holds_exact(b, env)?,
    })
}

pub fn conjunct_holds_exact(c: &Conjunct, env: &RatEnv) -> Option<bool> {
    let mut all = true;
    for l in c.literals() {
        all &= literal_holds_exact(&l, env)?;
    }
    Some(all)
}

pub fn dnf_holds_exact(d: &Dnf, env: &RatEnv) -> Option<bool> {
    let mut any = false;
    for c in &d.conjuncts {
        any |= conjunct_holds_exact(c, env)?;
    }
    Some(any)
}
