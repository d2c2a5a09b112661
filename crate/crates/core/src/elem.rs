//! Integer-root approximation, square roots and base-2 exponentiation.
//!
//! Everything here bottoms out in [`introot`]/[`isqrt`]: `appr(n, a, b)` is the
//! largest `m` with `m^b <= n^b * a`, so `appr(n, a, b) / n` is a lower
//! approximation of `a^(1/b)` with error below `1/n`.

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::creal::{ApartnessWitness, CauchyReal, Sign};
use crate::error::{Error, Result};
use crate::numeric::{ceil_log2, ceil_nat, floor_q, introot, isqrt, pow2_q, recip_nat, Int, Nat, Rational};

/// Exact rational exponents with denominators up to this size go through
/// [`exp2_rat`]; anything else is rounded to a dyadic exponent first.
pub const EXACT_EXPONENT_DENOM_LIMIT: u32 = 256;

/// Largest `m` with `m^b <= n^b * a`.
pub fn appr(n: &Nat, a: &Nat, b: u32) -> Result<Nat> {
    if n.is_zero() {
        return Err(Error::ZeroPrecision);
    }
    if b == 0 {
        return Err(Error::ZeroDegree);
    }
    introot(&(num_traits::pow(n.clone(), b as usize) * a), b)
}

/// `2^(p/q)`. For `p >= 0`, `approx(i) = appr(i, 2^p, q) / i`; for `p < 0`,
/// `approx(i) = i / appr(i, 2^|p|, q)`.
//
// For p < 0 write y = 2^(|p|/q) >= 1 and y_i = appr(i, 2^|p|, q)/i, so that
// 1 <= y_i <= y < y_i + 1/i. Then |1/y_i - 1/y| = (y - y_i)/(y y_i) < 1/i.
pub fn exp2_rat(p: &Int, q: u32) -> Result<CauchyReal> {
    if q == 0 {
        return Err(Error::ZeroDenominator);
    }
    let qi = Int::from(q);
    if p.is_multiple_of(&qi) {
        // appr is then exactly i * 2^(p/q), at every index
        return Ok(CauchyReal::from_rational(pow2_q(&(p / &qi))));
    }
    let base = Nat::one() << p.magnitude().to_u64().expect("exponent fits in u64");
    let negative = p.is_negative();
    Ok(CauchyReal::from_approx_fn(move |i| {
        let m = appr(i, &base, q).expect("index and degree are positive");
        let (num, den) = if negative { (i.clone(), m) } else { (m, i.clone()) };
        Rational::new(Int::from(num), Int::from(den))
    }))
}

/// Lower and upper rational bounds on `2^(a / 2^s)` whose gap is at most
/// `4 * 2^floor(|a|/2^s) / 2^bits`.
//
// The fractional part f/2^s is consumed bit by bit, least significant first:
// with v_0 = 0 and v_{j+1} = (v_j + b_j)/2 we reach v_s = f/2^s, and
// 2^(v_{j+1}) = sqrt(2^(v_j) * 2^(b_j)). In fixed point with `bits` fraction
// bits, Y_{j+1} = isqrt(Y_j * 2^(b_j) * 2^bits) stays a lower bound, and its
// deficit e obeys e' <= e * sqrt(2)/2 + 1, so e < 4 ulps throughout.
pub fn pow2_dyadic_bounds(a: &Int, s: u32, bits: u64) -> (Rational, Rational) {
    let mag = a.magnitude();
    let whole = (mag >> s).to_u64().expect("exponent fits in u64");
    let frac = mag & ((Nat::one() << s) - 1u32);
    let unit = Nat::one() << bits;
    let mut y = unit.clone();
    for j in 0..s {
        let mut t = &y * &unit;
        if frac.bit(u64::from(j)) {
            t <<= 1u32;
        }
        y = isqrt(&t);
    }
    let scale = Int::one() << whole;
    let den = Int::from(unit);
    let lo = Rational::new(Int::from(y.clone()) * &scale, den.clone());
    let hi = Rational::new((Int::from(y) + 4) * &scale, den);
    if a.is_negative() {
        (hi.recip(), lo.recip())
    } else {
        (lo, hi)
    }
}

/// Rational bounds `lo <= 2^q <= hi` for any rational exponent.
pub fn pow2_bounds(q: &Rational, bits: u64) -> (Rational, Rational) {
    if q.is_integer() {
        let v = pow2_q(q.numer());
        return (v.clone(), v);
    }
    let s = 48u32;
    let scaled = q * Rational::from_integer(Int::one() << s);
    let down = floor_q(&scaled);
    let up = &down + 1;
    let guard = bits + floor_q(q).magnitude().to_u64().unwrap_or(0) + 4;
    let (lo, _) = pow2_dyadic_bounds(&down, s, guard);
    let (_, hi) = pow2_dyadic_bounds(&up, s, guard);
    (lo, hi)
}

/// `2^x` for an arbitrary real argument.
//
// With U = floor(x(1)) + 2 we have x < U. Let delta = min(1, 1/(n 2^(U+2))).
// The argument is replaced by a dyadic r with |r - x| <= delta (sampling x
// at index ceil(2/delta), then rounding to a multiple of 2^-s <= delta/2), so
// r < U + 1 and 2^t is (2^(U+1) ln 2)-Lipschitz on the range involved:
// |2^r - 2^x| <= 2^(U+1) delta <= 1/(2n). 2^r itself is evaluated to 1/(2n).
pub fn exp2(x: &CauchyReal) -> CauchyReal {
    if let Some(q) = x.exact() {
        if let Some(d) = q.denom().to_u32().filter(|d| *d <= EXACT_EXPONENT_DENOM_LIMIT) {
            return exp2_rat(q.numer(), d).expect("denominator is positive");
        }
    }
    let x = x.clone();
    CauchyReal::from_approx_fn(move |n| {
        let upper = floor_q(&x.approx(&Nat::one())) + 2;
        let lipschitz = pow2_q(&(&upper + 2));
        let delta = std::cmp::min(Rational::one(), recip_nat(n) / lipschitz);
        let two_over_delta = Rational::from_integer(Int::from(2)) / &delta;
        let k = ceil_nat(&two_over_delta);
        let s = ceil_log2(&two_over_delta).max(0) as u32;
        let a = floor_q(&(x.approx(&k) * Rational::from_integer(Int::one() << s)));
        let whole = (a.magnitude() >> s).to_u64().expect("exponent fits in u64");
        let bits = (n * 8u32).bits() + whole + 1;
        pow2_dyadic_bounds(&a, s, bits).0
    })
}

/// What `sqrt` needs to know about its argument.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SqrtCert {
    Positive(ApartnessWitness),
    ExactZero,
}

/// Square root of a certified non-negative real.
//
// The witness gives x > 1/w. With k = max(w, 2n (isqrt(w) + 1)) the sample
// a = x(k) is positive and |sqrt(a) - sqrt(x)| <= |a - x| / sqrt(x) <= sqrt(w)/k
// <= 1/(2n). The result isqrt(floor(a M^2)) / M with M = 2n is floor(M sqrt a)/M,
// within another 1/(2n).
pub fn sqrt(x: &CauchyReal, cert: &SqrtCert) -> Result<CauchyReal> {
    let w = match cert {
        SqrtCert::ExactZero => {
            return match x.exact() {
                Some(q) if q.is_zero() => Ok(CauchyReal::zero()),
                _ => Err(Error::InvalidWitness),
            };
        }
        SqrtCert::Positive(w) => w,
    };
    if !w.verify(x) {
        return Err(Error::InvalidWitness);
    }
    if w.sign == Sign::Negative {
        return Err(Error::NegativeInput);
    }
    if let Some(q) = x.exact() {
        let (p, d) = (q.numer().magnitude(), q.denom().magnitude());
        let (rp, rd) = (isqrt(p), isqrt(d));
        if &(&rp * &rp) == p && &(&rd * &rd) == d {
            return Ok(CauchyReal::from_rational(Rational::new(Int::from(rp), Int::from(rd))));
        }
    }
    let x = x.clone();
    let wn = w.index.clone();
    let stretch = isqrt(&wn) + 1u32;
    Ok(CauchyReal::from_approx_fn(move |n| {
        let m = n * 2u32;
        let k = std::cmp::max(wn.clone(), &m * &stretch);
        let a = x.approx(&k);
        let scaled = a * Rational::from_integer(Int::from(&m * &m));
        let inner = floor_q(&scaled).to_biguint().unwrap_or_default();
        Rational::new(Int::from(isqrt(&inner)), Int::from(m))
    }))
}

/// Square root that finds its own certificate, searching up to `fuel`.
pub fn sqrt_auto(x: &CauchyReal, fuel: u32) -> Result<CauchyReal> {
    if x.exact().is_some_and(|q| q.is_zero()) {
        return sqrt(x, &SqrtCert::ExactZero);
    }
    match x.apartness(fuel) {
        Some(w) if w.sign == Sign::Negative => Err(Error::NegativeInput),
        Some(w) => sqrt(x, &SqrtCert::Positive(w)),
        None => Err(Error::UnknownAtFuel { fuel }),
    }
}
