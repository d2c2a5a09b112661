//! Arbitrary-precision integers and rationals, and the integer root
//! operators every approximation in the crate is built from.
//!
//! `Nat`, `Int` and `Rational` are the `num` big-number types. `BigRational`
//! is always kept in lowest terms with a positive denominator, which is
//! exactly the canonical form the rest of the crate relies on.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Nat = BigUint;
pub type Int = BigInt;
pub type Rational = BigRational;

/// Largest `r` with `r * r <= k` (Newton iteration from above).
pub fn isqrt(k: &Nat) -> Nat {
    if k.is_zero() {
        return Nat::zero();
    }
    let bits = k.bits();
    // 2^ceil(bits/2) > sqrt(k), so the iteration decreases monotonically.
    let mut x = Nat::one() << bits.div_ceil(2);
    loop {
        let y = (&x + k / &x) >> 1u32;
        if y >= x {
            return x;
        }
        x = y;
    }
}

/// Largest `m` with `m^b <= k`, by binary search on `[0, 2^(ceil(bits(k)/b) + 1)]`.
pub fn introot(k: &Nat, b: u32) -> Result<Nat> {
    if b == 0 {
        return Err(Error::ZeroDegree);
    }
    if b == 1 || k.is_zero() {
        return Ok(k.clone());
    }
    let hi_bits = k.bits().div_ceil(u64::from(b)) + 1;
    // invariant: lo^b <= k < hi^b
    let mut lo = Nat::zero();
    let mut hi = Nat::one() << hi_bits;
    while &hi - &lo > Nat::one() {
        let mid = (&lo + &hi) >> 1u32;
        if num_traits::pow::pow(mid.clone(), b as usize) <= *k {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Folds a signed integer onto the naturals: `n >= 0` goes to `2n`, `-n` to `2n + 1`.
pub fn encode_int(z: &Int) -> Nat {
    let mag = z.magnitude();
    if z.sign() == Sign::Minus {
        (mag << 1u32) + 1u32
    } else {
        mag << 1u32
    }
}

pub fn decode_int(n: &Nat) -> Int {
    let mag = Int::from(n >> 1u32);
    if n.is_odd() {
        -mag
    } else {
        mag
    }
}

/// The unique `k` with `k*b <= a < (k+1)*b`.
pub fn rat_floor(a: &Int, b: &Nat) -> Result<Int> {
    if b.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    Ok(a.div_floor(&Int::from(b.clone())))
}

pub fn floor_q(q: &Rational) -> Int {
    q.numer().div_floor(q.denom())
}

pub fn ceil_q(q: &Rational) -> Int {
    -floor_q(&-q)
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(Int::from(n), Int::from(d))
}

pub fn int_q(n: impl Into<Int>) -> Rational {
    Rational::from_integer(n.into())
}

/// `1/n` for a positive precision index.
pub fn recip_nat(n: &Nat) -> Rational {
    Rational::new(Int::one(), Int::from(n.clone()))
}

/// Smallest natural `>= q` (zero for non-positive `q`).
pub fn ceil_nat(q: &Rational) -> Nat {
    ceil_q(q).to_biguint().unwrap_or_default()
}

/// Denominator of a rational as a natural.
pub fn denom_nat(q: &Rational) -> Nat {
    q.denom().magnitude().clone()
}

/// Ordering key used by every enumeration in the crate: height
/// `max(|num|, den)`, then `|num|`, then denominator, then positive before
/// negative. Zero is therefore first, followed by `1, -1, 1/2, -1/2, 2, -2, ...`.
pub fn height(q: &Rational) -> Nat {
    std::cmp::max(q.numer().magnitude(), q.denom().magnitude()).clone()
}

pub fn height_cmp(a: &Rational, b: &Rational) -> Ordering {
    height(a)
        .cmp(&height(b))
        .then_with(|| a.numer().magnitude().cmp(b.numer().magnitude()))
        .then_with(|| a.denom().cmp(b.denom()))
        .then_with(|| b.numer().sign().cmp(&a.numer().sign()))
}

/// All rationals, each once, in [`height_cmp`] order.
#[derive(Debug, Clone, Default)]
pub struct RationalsByHeight {
    h: u64,
    pending: std::collections::VecDeque<Rational>,
}

impl RationalsByHeight {
    pub fn new() -> Self {
        Self::default()
    }

    fn fill(&mut self) {
        while self.pending.is_empty() {
            self.h += 1;
            let h = self.h;
            let mut level = Vec::new();
            if h == 1 {
                level.push(Rational::zero());
            }
            // den = h, |num| <= h
            for p in 1..=h {
                if p.gcd(&h) == 1 {
                    level.push(rat(p as i64, h as i64));
                    level.push(rat(-(p as i64), h as i64));
                }
            }
            // |num| = h, den < h
            for q in 1..h {
                if h.gcd(&q) == 1 {
                    level.push(rat(h as i64, q as i64));
                    level.push(rat(-(h as i64), q as i64));
                }
            }
            level.sort_by(height_cmp);
            level.dedup();
            self.pending.extend(level);
        }
    }
}

impl Iterator for RationalsByHeight {
    type Item = Rational;

    fn next(&mut self) -> Option<Rational> {
        self.fill();
        self.pending.pop_front()
    }
}

/// Tuples of rationals of a fixed arity. Level `L` holds the tuples whose
/// largest component index (in [`RationalsByHeight`] order) is `L`; within a
/// level, tuples are listed in lexicographic index order.
#[derive(Debug, Clone)]
pub struct RationalTuples {
    arity: usize,
    source: RationalsByHeight,
    seen: Vec<Rational>,
    level: usize,
    odometer: Vec<usize>,
    done_empty: bool,
}

impl RationalTuples {
    pub fn new(arity: usize) -> Self {
        RationalTuples {
            arity,
            source: RationalsByHeight::new(),
            seen: Vec::new(),
            level: 0,
            odometer: vec![0; arity],
            done_empty: false,
        }
    }

    fn value(&mut self, idx: usize) -> Rational {
        while self.seen.len() <= idx {
            let q = self.source.next().expect("rationals are infinite");
            self.seen.push(q);
        }
        self.seen[idx].clone()
    }

    fn advance(&mut self) -> bool {
        // next vector in [0..=level]^arity, lexicographic
        for pos in (0..self.arity).rev() {
            if self.odometer[pos] < self.level {
                self.odometer[pos] += 1;
                for later in &mut self.odometer[pos + 1..] {
                    *later = 0;
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for RationalTuples {
    type Item = Vec<Rational>;

    fn next(&mut self) -> Option<Vec<Rational>> {
        if self.arity == 0 {
            if self.done_empty {
                return None;
            }
            self.done_empty = true;
            return Some(Vec::new());
        }
        loop {
            if self.odometer.iter().copied().max() == Some(self.level) {
                let idx = self.odometer.clone();
                let tuple = idx.into_iter().map(|i| self.value(i)).collect();
                if !self.advance() {
                    self.level += 1;
                    self.odometer = vec![0; self.arity];
                }
                return Some(tuple);
            }
            if !self.advance() {
                self.level += 1;
                self.odometer = vec![0; self.arity];
            }
        }
    }
}

/// One end of an interval searched for simple rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum End {
    Closed(Rational),
    Open(Rational),
    Unbounded,
}

impl End {
    fn value(&self) -> Option<&Rational> {
        match self {
            End::Closed(q) | End::Open(q) => Some(q),
            End::Unbounded => None,
        }
    }

    fn is_open(&self) -> bool {
        !matches!(self, End::Closed(_))
    }
}

fn integer_in(lo: &End, hi: &End) -> Option<Int> {
    // smallest-magnitude integer inside the interval, if any
    let first = match lo {
        End::Closed(q) => Some(ceil_q(q)),
        End::Open(q) => Some(floor_q(q) + 1),
        End::Unbounded => None,
    };
    let last = match hi {
        End::Closed(q) => Some(floor_q(q)),
        End::Open(q) => Some(ceil_q(q) - 1),
        End::Unbounded => None,
    };
    match (first, last) {
        (Some(a), Some(b)) if a > b => None,
        (Some(a), Some(b)) => Some(if a.is_positive() {
            a
        } else if b.is_negative() {
            b
        } else {
            Int::zero()
        }),
        (Some(a), None) => Some(if a.is_positive() { a } else { Int::zero() }),
        (None, Some(b)) => Some(if b.is_negative() { b } else { Int::zero() }),
        (None, None) => Some(Int::zero()),
    }
}

/// The rational of least denominator (then least magnitude) in the interval
/// described by `lo` and `hi`, or `None` if the interval is empty.
pub fn simplest_in(lo: &End, hi: &End) -> Option<Rational> {
    if let (Some(a), Some(b)) = (lo.value(), hi.value()) {
        match a.cmp(b) {
            Ordering::Greater => return None,
            Ordering::Equal => {
                return if lo.is_open() || hi.is_open() { None } else { Some(a.clone()) };
            }
            Ordering::Less => {}
        }
    }
    if let Some(k) = integer_in(lo, hi) {
        return Some(Rational::from_integer(k));
    }
    // No integer inside, so both ends are finite and share an integer part.
    let a = lo.value().expect("bounded below");
    let b = hi.value().expect("bounded above");
    let base = floor_q(a);
    let shift = Rational::from_integer(base.clone());
    let a = a - &shift;
    let b = b - &shift;
    // x in (a, b) with 0 <= a < b <= 1  <=>  1/x in (1/b, 1/a)
    let inv_lo = match hi {
        End::Closed(_) => End::Closed(b.recip()),
        _ => End::Open(b.recip()),
    };
    let inv_hi = if a.is_zero() {
        End::Unbounded
    } else {
        match lo {
            End::Closed(_) => End::Closed(a.recip()),
            _ => End::Open(a.recip()),
        }
    };
    let inner = simplest_in(&inv_lo, &inv_hi)?;
    Some(shift + inner.recip())
}

/// Simplest rational in the closed interval `[lo, hi]`.
pub fn simplest_between(lo: &Rational, hi: &Rational) -> Option<Rational> {
    simplest_in(&End::Closed(lo.clone()), &End::Closed(hi.clone()))
}

/// `2^e` as a rational, for any integer exponent.
pub fn pow2_q(e: &Int) -> Rational {
    let mag = e.magnitude().to_u64().expect("exponent fits in u64");
    let p = Int::one() << mag;
    if e.is_negative() {
        Rational::new(Int::one(), p)
    } else {
        Rational::from_integer(p)
    }
}

/// Natural logarithm free helper: smallest `s` with `2^s >= q` for positive `q`.
pub fn ceil_log2(q: &Rational) -> i64 {
    debug_assert!(q.is_positive());
    let mut s = q.numer().bits() as i64 - q.denom().bits() as i64 - 1;
    while pow2_q(&Int::from(s)) < *q {
        s += 1;
    }
    s
}
