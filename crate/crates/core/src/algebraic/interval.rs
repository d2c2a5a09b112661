//! Closed interval enclosures over the extended rationals.

use std::cmp::{max, min};
use std::fmt;

use num_traits::{Signed, Zero};

use crate::elem::pow2_bounds;
use crate::lexp::Term;
use crate::numeric::{ceil_q, floor_q, isqrt, Int, Rational};

/// Exponents beyond this magnitude are enclosed by `0` or `+inf`.
const EXP_CLAMP: i64 = 4096;
const ROOT_BITS: u64 = 32;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtRat {
    NegInf,
    Fin(Rational),
    PosInf,
}

impl ExtRat {
    pub fn fin(&self) -> Option<&Rational> {
        match self {
            ExtRat::Fin(q) => Some(q),
            _ => None,
        }
    }

    fn is_zero(&self) -> bool {
        matches!(self, ExtRat::Fin(q) if q.is_zero())
    }

    fn is_positive(&self) -> bool {
        match self {
            ExtRat::Fin(q) => q.is_positive(),
            ExtRat::PosInf => true,
            ExtRat::NegInf => false,
        }
    }

    fn neg(&self) -> ExtRat {
        match self {
            ExtRat::NegInf => ExtRat::PosInf,
            ExtRat::PosInf => ExtRat::NegInf,
            ExtRat::Fin(q) => ExtRat::Fin(-q),
        }
    }

    /// Sum of two bounds on the same side; `inf - inf` never arises there.
    fn add(&self, o: &ExtRat) -> ExtRat {
        match (self, o) {
            (ExtRat::Fin(a), ExtRat::Fin(b)) => ExtRat::Fin(a + b),
            (ExtRat::NegInf, _) | (_, ExtRat::NegInf) => ExtRat::NegInf,
            _ => ExtRat::PosInf,
        }
    }

    /// Product with `0 * inf = 0`, which is right for bounds of finite reals.
    fn mul(&self, o: &ExtRat) -> ExtRat {
        match (self, o) {
            (ExtRat::Fin(a), ExtRat::Fin(b)) => ExtRat::Fin(a * b),
            _ if self.is_zero() || o.is_zero() => ExtRat::Fin(Rational::zero()),
            _ if self.is_positive() == o.is_positive() => ExtRat::PosInf,
            _ => ExtRat::NegInf,
        }
    }
}

impl fmt::Display for ExtRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRat::NegInf => write!(f, "-inf"),
            ExtRat::Fin(q) => write!(f, "{q}"),
            ExtRat::PosInf => write!(f, "+inf"),
        }
    }
}

/// `[lo, hi]` with `lo <= hi`; infinite ends are open.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: ExtRat,
    pub hi: ExtRat,
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl Interval {
    pub fn point(q: Rational) -> Self {
        Interval { lo: ExtRat::Fin(q.clone()), hi: ExtRat::Fin(q) }
    }

    pub fn closed(lo: Rational, hi: Rational) -> Self {
        Interval { lo: ExtRat::Fin(lo), hi: ExtRat::Fin(hi) }
    }

    pub fn everything() -> Self {
        Interval { lo: ExtRat::NegInf, hi: ExtRat::PosInf }
    }

    pub fn contains_zero(&self) -> bool {
        let z = ExtRat::Fin(Rational::zero());
        self.lo <= z && z <= self.hi
    }

    /// Every point is `> 0`.
    pub fn positive(&self) -> bool {
        self.lo.is_positive()
    }

    /// Every point is `<= 0`.
    pub fn non_positive(&self) -> bool {
        self.hi <= ExtRat::Fin(Rational::zero())
    }

    /// Every point satisfies `|v| >= eps`.
    pub fn outside(&self, eps: &Rational) -> bool {
        self.lo >= ExtRat::Fin(eps.clone()) || self.hi <= ExtRat::Fin(-eps)
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval { lo: self.lo.add(&o.lo), hi: self.hi.add(&o.hi) }
    }

    pub fn neg(&self) -> Interval {
        Interval { lo: self.hi.neg(), hi: self.lo.neg() }
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let ps = [self.lo.mul(&o.lo), self.lo.mul(&o.hi), self.hi.mul(&o.lo), self.hi.mul(&o.hi)];
        let lo = ps.iter().min().expect("four products").clone();
        let hi = ps.iter().max().expect("four products").clone();
        Interval { lo, hi }
    }

    pub fn square(&self) -> Interval {
        let a = self.lo.mul(&self.lo);
        let b = self.hi.mul(&self.hi);
        let lo = if self.contains_zero() { ExtRat::Fin(Rational::zero()) } else { min(a.clone(), b.clone()) };
        Interval { lo, hi: max(a, b) }
    }

    pub fn exp2(&self) -> Interval {
        let lo = match &self.lo {
            ExtRat::Fin(q) if q >= &Rational::from_integer(Int::from(-EXP_CLAMP)) => {
                ExtRat::Fin(pow2_bounds(q, ROOT_BITS).0)
            }
            _ => ExtRat::Fin(Rational::zero()),
        };
        let hi = match &self.hi {
            ExtRat::Fin(q) if q <= &Rational::from_integer(Int::from(EXP_CLAMP)) => {
                ExtRat::Fin(pow2_bounds(q, ROOT_BITS).1)
            }
            _ => ExtRat::PosInf,
        };
        Interval { lo, hi }
    }

    /// `None` when the whole interval is negative.
    pub fn sqrt(&self) -> Option<Interval> {
        if self.hi < ExtRat::Fin(Rational::zero()) {
            return None;
        }
        let lo = match &self.lo {
            ExtRat::Fin(q) if q.is_positive() => ExtRat::Fin(sqrt_bounds(q).0),
            _ => ExtRat::Fin(Rational::zero()),
        };
        let hi = match &self.hi {
            ExtRat::Fin(q) => ExtRat::Fin(sqrt_bounds(q).1),
            _ => ExtRat::PosInf,
        };
        Some(Interval { lo, hi })
    }
}

/// `lo <= sqrt(q) <= hi` for `q >= 0`.
pub fn sqrt_bounds(q: &Rational) -> (Rational, Rational) {
    let scale = Int::from(1u8) << (2 * ROOT_BITS) as usize;
    let unit = Int::from(1u8) << ROOT_BITS as usize;
    let scaled = q * Rational::from_integer(scale);
    let down = floor_q(&scaled).to_biguint().unwrap_or_default();
    let up = ceil_q(&scaled).to_biguint().unwrap_or_default();
    let lo = Rational::new(Int::from(isqrt(&down)), unit.clone());
    let hi = Rational::new(Int::from(isqrt(&up)) + 1, unit);
    (lo, hi)
}

/// Enclosure of `t` when each variable ranges over the interval `vars`
/// returns; unknown variables range over the whole line. `None` means `t` is
/// undefined everywhere on the region (a square root of negatives).
pub fn enclose(t: &Term, vars: &impl Fn(&str) -> Option<Interval>) -> Option<Interval> {
    Some(match t {
        Term::Const(q) => Interval::point(q.clone()),
        Term::Var(v) => vars(v).unwrap_or_else(Interval::everything),
        Term::Add(a, b) => enclose(a, vars)?.add(&enclose(b, vars)?),
        Term::Sub(a, b) => enclose(a, vars)?.sub(&enclose(b, vars)?),
        Term::Mul(a, b) if a == b => enclose(a, vars)?.square(),
        Term::Mul(a, b) => enclose(a, vars)?.mul(&enclose(b, vars)?),
        Term::Neg(a) => enclose(a, vars)?.neg(),
        Term::Exp(a) => enclose(a, vars)?.exp2(),
        Term::Sqrt(a) => enclose(a, vars)?.sqrt()?,
    })
}
