//! Cauchy reals with a fixed modulus.
//!
//! A [`CauchyReal`] is a total, deterministic map from precision indices
//! `n >= 1` to rationals such that `|approx(n) - x| <= 1/n` for the real `x`
//! it stands for. Every constructor in the crate preserves that contract, so
//! there is no separate "is this convergent" check: a value that exists is a
//! valid real.
//!
//! Equality of reals is not decidable. The API offers [`equiv_up_to`] (a
//! necessary test at a given resolution) and [`compare`], which either
//! returns a re-checkable order certificate or gives up at its fuel.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numeric::{ceil_nat, ceil_q, floor_q, recip_nat, Int, Nat, Rational};

type ApproxFn = dyn Fn(&Nat) -> Rational + Send + Sync;

/// A computable real given by rational approximations with modulus `1/n`.
#[derive(Clone)]
pub struct CauchyReal(Arc<Inner>);

struct Inner {
    exact: Option<Rational>,
    approx: Option<Box<ApproxFn>>,
    // memo of approx(n); observationally transparent since approx is pure
    cache: Mutex<HashMap<Nat, Rational>>,
    bound: OnceLock<Rational>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Positive,
    Negative,
}

/// Certificate that a real is bounded away from zero: `|approx(index)| > 2/index`
/// with the recorded sign. It implies `|x| > 1/index`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApartnessWitness {
    pub index: Nat,
    pub sign: Sign,
}

impl ApartnessWitness {
    pub fn new(index: Nat, sign: Sign) -> Self {
        ApartnessWitness { index, sign }
    }

    /// Re-evaluates the witness inequality against `x`.
    pub fn verify(&self, x: &CauchyReal) -> bool {
        if self.index.is_zero() {
            return false;
        }
        let q = x.approx(&self.index);
        let two_over_n = recip_nat(&self.index) * Int::from(2);
        match self.sign {
            Sign::Positive => q > two_over_n,
            Sign::Negative => q < -two_over_n,
        }
    }

    /// A rational strictly below `|x|`.
    pub(crate) fn magnitude_floor(&self, x: &CauchyReal) -> Rational {
        x.approx(&self.index).abs() - recip_nat(&self.index)
    }
}

/// Witness for `x < y`: at precision `index`,
/// `m * (x_k + 2/k) + 1 < m * y_k`, which forces `y - x > 1/m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderCertificate {
    pub index: Nat,
    pub m: Nat,
}

impl OrderCertificate {
    /// Re-checks `lesser < greater` from fresh approximants.
    pub fn certifies_less(&self, lesser: &CauchyReal, greater: &CauchyReal) -> bool {
        if self.index.is_zero() || self.m.is_zero() {
            return false;
        }
        let k = &self.index;
        let m = Rational::from_integer(Int::from(self.m.clone()));
        let x = lesser.approx(k) + recip_nat(k) * Int::from(2);
        let y = greater.approx(k);
        &m * x + Rational::one() < m * y
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CompareResult {
    Less(OrderCertificate),
    Greater(OrderCertificate),
    UnknownAtFuel(u32),
}

impl CompareResult {
    /// Re-checks the attached certificate for the pair it was produced from.
    pub fn recheck(&self, x: &CauchyReal, y: &CauchyReal) -> bool {
        match self {
            CompareResult::Less(c) => c.certifies_less(x, y),
            CompareResult::Greater(c) => c.certifies_less(y, x),
            CompareResult::UnknownAtFuel(_) => true,
        }
    }

    pub fn is_less(&self) -> bool {
        matches!(self, CompareResult::Less(_))
    }

    pub fn is_greater(&self) -> bool {
        matches!(self, CompareResult::Greater(_))
    }
}

impl CauchyReal {
    pub fn from_rational(q: Rational) -> Self {
        CauchyReal(Arc::new(Inner {
            exact: Some(q),
            approx: None,
            cache: Mutex::new(HashMap::new()),
            bound: OnceLock::new(),
        }))
    }

    pub fn from_int(n: impl Into<Int>) -> Self {
        Self::from_rational(Rational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Self::from_rational(Rational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    /// Wraps an approximation function. The caller promises
    /// `|f(n) - x| <= 1/n` for every `n >= 1` and that `f` is pure.
    pub fn from_approx_fn<F>(f: F) -> Self
    where
        F: Fn(&Nat) -> Rational + Send + Sync + 'static,
    {
        CauchyReal(Arc::new(Inner {
            exact: None,
            approx: Some(Box::new(f)),
            cache: Mutex::new(HashMap::new()),
            bound: OnceLock::new(),
        }))
    }

    /// The represented value, when it is known to be this exact rational.
    pub fn exact(&self) -> Option<&Rational> {
        self.0.exact.as_ref()
    }

    pub fn approx(&self, n: &Nat) -> Rational {
        assert!(!n.is_zero(), "precision index must be at least 1");
        if let Some(q) = &self.0.exact {
            return q.clone();
        }
        if let Some(q) = self.0.cache.lock().expect("cache poisoned").get(n) {
            return q.clone();
        }
        let f = self.0.approx.as_ref().expect("inexact reals carry an approximation");
        let q = f(n);
        self.0.cache.lock().expect("cache poisoned").insert(n.clone(), q.clone());
        q
    }

    pub fn at(&self, n: u64) -> Rational {
        self.approx(&Nat::from(n))
    }

    /// `|approx(1)| + 1`, an upper bound on `|x|`.
    pub fn bound(&self) -> Rational {
        self.0.bound.get_or_init(|| self.approx(&Nat::one()).abs() + Rational::one()).clone()
    }

    // approx(n) = x(2n) + y(2n): each term is within 1/(2n).
    pub fn add(&self, other: &CauchyReal) -> CauchyReal {
        if let (Some(a), Some(b)) = (self.exact(), other.exact()) {
            return Self::from_rational(a + b);
        }
        let (x, y) = (self.clone(), other.clone());
        Self::from_approx_fn(move |n| {
            let m = n << 1u32;
            x.approx(&m) + y.approx(&m)
        })
    }

    pub fn neg(&self) -> CauchyReal {
        if let Some(a) = self.exact() {
            return Self::from_rational(-a);
        }
        let x = self.clone();
        Self::from_approx_fn(move |n| -x.approx(n))
    }

    pub fn sub(&self, other: &CauchyReal) -> CauchyReal {
        self.add(&other.neg())
    }

    // With Bx = |x(1)| + 1 >= |x| and k = n * ceil(Bx + By + 1):
    //   |x_k y_k - x y| <= |x_k| |y_k - y| + |y| |x_k - x|
    //                  <= (Bx + 1/k)/k + By/k <= (Bx + By + 1)/k <= 1/n.
    pub fn mul(&self, other: &CauchyReal) -> CauchyReal {
        if let (Some(a), Some(b)) = (self.exact(), other.exact()) {
            return Self::from_rational(a * b);
        }
        let (x, y) = (self.clone(), other.clone());
        let factor: Arc<OnceLock<Nat>> = Arc::new(OnceLock::new());
        Self::from_approx_fn(move |n| {
            let f = factor.get_or_init(|| ceil_nat(&(x.bound() + y.bound() + Rational::one())));
            let k = n * f;
            x.approx(&k) * y.approx(&k)
        })
    }

    pub fn square(&self) -> CauchyReal {
        self.mul(self)
    }

    /// Multiplicative inverse of a real certified apart from zero.
    //
    // The witness gives |x| > 1/w. For k = max(w, 4 w^2 n) >= 2w we get
    // |x_k| > 1/(2w), hence |1/x_k - 1/x| <= (1/k) * 2w * w <= 1/(2n).
    pub fn inverse(&self, w: &ApartnessWitness) -> Result<CauchyReal> {
        if !w.verify(self) {
            return Err(Error::InvalidWitness);
        }
        if let Some(a) = self.exact() {
            return Ok(Self::from_rational(a.recip()));
        }
        let x = self.clone();
        let wn = w.index.clone();
        let scale = &wn * &wn * 4u32;
        Ok(Self::from_approx_fn(move |n| {
            let k = std::cmp::max(wn.clone(), n * &scale);
            x.approx(&k).recip()
        }))
    }

    /// Searches indices `1, 2, 4, ..., 2^fuel` for a sign certificate.
    pub fn apartness(&self, fuel: u32) -> Option<ApartnessWitness> {
        for j in 0..=fuel {
            let n = Nat::one() << j;
            let q = self.approx(&n);
            let two_over_n = recip_nat(&n) * Int::from(2);
            if q > two_over_n {
                return Some(ApartnessWitness::new(n, Sign::Positive));
            }
            if q < -two_over_n {
                return Some(ApartnessWitness::new(n, Sign::Negative));
            }
        }
        None
    }

    /// Integer part. Exact rationals are floored directly; otherwise an
    /// approximation interval `[q - 1/n, q + 1/n]` free of integers settles
    /// it. A non-exact value sitting on an integer is never settled.
    pub fn floor(&self, fuel: u32) -> Result<Int> {
        if let Some(q) = self.exact() {
            return Ok(floor_q(q));
        }
        for j in 1..=fuel {
            let n = Nat::one() << j;
            let q = self.approx(&n);
            let eps = recip_nat(&n);
            let lo = &q - &eps;
            let hi = &q + &eps;
            if ceil_q(&lo) > floor_q(&hi) {
                return Ok(floor_q(&q));
            }
        }
        Err(Error::UnknownAtFuel { fuel })
    }
}

/// Certified comparison: `Less` when `x(n) + 2/n < y(n)` at some tried index.
pub fn compare(x: &CauchyReal, y: &CauchyReal, fuel: u32) -> CompareResult {
    for j in 0..=fuel {
        let n = Nat::one() << j;
        let two_over_n = recip_nat(&n) * Int::from(2);
        let xn = x.approx(&n);
        let yn = y.approx(&n);
        let up = &yn - &xn - &two_over_n;
        if up.is_positive() {
            return CompareResult::Less(certificate(n, &up));
        }
        let down = xn - yn - two_over_n;
        if down.is_positive() {
            return CompareResult::Greater(certificate(n, &down));
        }
    }
    CompareResult::UnknownAtFuel(fuel)
}

fn certificate(index: Nat, gap: &Rational) -> OrderCertificate {
    // 1/m < gap
    let m: Int = floor_q(&gap.recip()) + 1;
    OrderCertificate { index, m: m.to_biguint().expect("gap is positive") }
}

/// Necessary test for `x ~ y` at resolution `1/n`: `|x(4n) - y(4n)| <= 1/(2n)`.
/// Equivalent reals always pass; passing at every `n` is evidence, not proof.
pub fn equiv_up_to(x: &CauchyReal, y: &CauchyReal, n: u64) -> bool {
    assert!(n >= 1, "resolution index must be at least 1");
    let m = Nat::from(4u32) * n;
    (x.approx(&m) - y.approx(&m)).abs() <= Rational::new(Int::one(), Int::from(2 * n))
}

impl fmt::Debug for CauchyReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exact() {
            Some(q) => write!(f, "CauchyReal({q})"),
            None => write!(f, "CauchyReal(~{} @1024)", self.at(1024)),
        }
    }
}

impl From<Rational> for CauchyReal {
    fn from(q: Rational) -> Self {
        CauchyReal::from_rational(q)
    }
}

impl From<i64> for CauchyReal {
    fn from(n: i64) -> Self {
        CauchyReal::from_int(n)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&CauchyReal> for &CauchyReal {
            type Output = CauchyReal;
            fn $method(self, rhs: &CauchyReal) -> CauchyReal {
                CauchyReal::$method(self, rhs)
            }
        }
        impl $trait<CauchyReal> for CauchyReal {
            type Output = CauchyReal;
            fn $method(self, rhs: CauchyReal) -> CauchyReal {
                CauchyReal::$method(&self, &rhs)
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);

impl Neg for &CauchyReal {
    type Output = CauchyReal;
    fn neg(self) -> CauchyReal {
        CauchyReal::neg(self)
    }
}

impl Neg for CauchyReal {
    type Output = CauchyReal;
    fn neg(self) -> CauchyReal {
        CauchyReal::neg(&self)
    }
}
