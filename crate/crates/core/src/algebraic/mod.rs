//! Polynomials over computable reals, odd-degree root isolation by certified
//! bisection, interval enclosures and rational box refinement.

pub mod interval;
pub mod search;

use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::{One, Signed, Zero};

use crate::creal::{compare, ApartnessWitness, CauchyReal, CompareResult, OrderCertificate, Sign};
use crate::error::{Error, Result};
use crate::numeric::{ceil_q, Int, Nat, Rational};

pub use search::{refine_box, refine_box_with, RatBox, Refinement};

/// Fuel used when a constructor has to find the leading coefficient's witness
/// itself from exact coefficients.
const EXACT_WITNESS_FUEL: u32 = 1 << 16;

/// Sign queries retry with this many doublings of the caller's fuel.
const FUEL_ESCALATIONS: u32 = 3;

/// `sum c_i x^i` with a certificate that the leading coefficient is nonzero.
#[derive(Clone)]
pub struct Polynomial {
    coeffs: Vec<CauchyReal>,
    lead_witness: ApartnessWitness,
}

impl Polynomial {
    pub fn new(coeffs: Vec<CauchyReal>, lead_witness: ApartnessWitness) -> Result<Self> {
        match coeffs.last() {
            Some(lead) if lead_witness.verify(lead) => Ok(Polynomial { coeffs, lead_witness }),
            _ => Err(Error::InvalidWitness),
        }
    }

    /// Finds the leading witness by searching up to `fuel`.
    pub fn with_fuel(coeffs: Vec<CauchyReal>, fuel: u32) -> Result<Self> {
        let lead = coeffs.last().ok_or(Error::InvalidWitness)?;
        let w = lead.apartness(fuel).ok_or(Error::UnknownAtFuel { fuel })?;
        Polynomial::new(coeffs, w)
    }

    /// Coefficients from the constant term upwards; the last must be nonzero.
    pub fn from_rationals(coeffs: &[Rational]) -> Result<Self> {
        match coeffs.last() {
            Some(q) if !q.is_zero() => {
                let reals = coeffs.iter().cloned().map(CauchyReal::from_rational).collect();
                Polynomial::with_fuel(reals, EXACT_WITNESS_FUEL)
            }
            _ => Err(Error::InvalidWitness),
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[CauchyReal] {
        &self.coeffs
    }

    pub fn lead_witness(&self) -> &ApartnessWitness {
        &self.lead_witness
    }

    /// Bound `M` with every real root strictly inside `(-M, M)`:
    /// `1 + max |c_i| / |c_lead|` from certified coefficient bounds.
    pub fn root_bound(&self) -> Int {
        let lead = self.lead_witness.magnitude_floor(&self.coeffs[self.degree()]);
        let one = Nat::one();
        let top = self.coeffs[..self.degree()]
            .iter()
            .map(|c| c.approx(&one).abs() + Rational::one())
            .max()
            .unwrap_or_else(Rational::zero);
        ceil_q(&(top / lead)) + 1
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Polynomial").field("coeffs", &self.coeffs).field("lead_witness", &self.lead_witness).finish()
    }
}

/// Horner evaluation.
pub fn eval_poly(p: &Polynomial, x: &CauchyReal) -> CauchyReal {
    let mut it = p.coeffs.iter().rev();
    let mut acc = it.next().expect("polynomial has a coefficient").clone();
    for c in it {
        acc = acc.mul(x).add(c);
    }
    acc
}

/// Re-checkable sign of `p(t)` at a rational point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SignCert {
    /// `p(t)` evaluated exactly to this value.
    Exact(Rational),
    /// Certifies `p(t) < 0`.
    Negative(OrderCertificate),
    /// Certifies `p(t) > 0`.
    Positive(OrderCertificate),
}

impl SignCert {
    /// Sign of the certified value, or `None` for an exact zero.
    pub fn sign(&self) -> Option<Sign> {
        match self {
            SignCert::Exact(v) if v.is_positive() => Some(Sign::Positive),
            SignCert::Exact(v) if v.is_negative() => Some(Sign::Negative),
            SignCert::Exact(_) => None,
            SignCert::Negative(_) => Some(Sign::Negative),
            SignCert::Positive(_) => Some(Sign::Positive),
        }
    }

    pub fn recheck(&self, p: &Polynomial, t: &Rational) -> bool {
        let v = eval_poly(p, &CauchyReal::from_rational(t.clone()));
        let zero = CauchyReal::zero();
        match self {
            SignCert::Exact(q) => v.exact() == Some(q),
            SignCert::Negative(c) => c.certifies_less(&v, &zero),
            SignCert::Positive(c) => c.certifies_less(&zero, &v),
        }
    }
}

fn sign_at(p: &Polynomial, t: &Rational, fuel: u32) -> Option<SignCert> {
    let v = eval_poly(p, &CauchyReal::from_rational(t.clone()));
    if let Some(q) = v.exact() {
        return Some(SignCert::Exact(q.clone()));
    }
    match compare(&v, &CauchyReal::zero(), fuel) {
        CompareResult::Less(c) => Some(SignCert::Negative(c)),
        CompareResult::Greater(c) => Some(SignCert::Positive(c)),
        CompareResult::UnknownAtFuel(_) => None,
    }
}

/// `[lo, hi]` with certified signs of `p` at both ends; a degenerate bracket
/// sits on an exact root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bracket {
    pub lo: Rational,
    pub hi: Rational,
    pub lo_sign: SignCert,
    pub hi_sign: SignCert,
}

impl Bracket {
    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Int::from(2)
    }

    /// Both end certificates re-check and the signs differ (or the bracket is
    /// an exact root).
    pub fn verify(&self, p: &Polynomial) -> bool {
        if !self.lo_sign.recheck(p, &self.lo) || !self.hi_sign.recheck(p, &self.hi) {
            return false;
        }
        if self.lo == self.hi {
            return self.lo_sign.sign().is_none();
        }
        matches!(
            (self.lo_sign.sign(), self.hi_sign.sign()),
            (Some(Sign::Positive), Some(Sign::Negative)) | (Some(Sign::Negative), Some(Sign::Positive))
        )
    }
}

/// Sign-change bisection with trisection fallback. Brackets are produced on
/// demand and kept, so every caller sees the same nested sequence.
pub struct RootIsolator {
    poly: Polynomial,
    fuel: u32,
    brackets: Mutex<Vec<Bracket>>,
}

impl RootIsolator {
    pub fn new(p: &Polynomial, fuel: u32) -> Result<Self> {
        if p.degree().is_multiple_of(2) {
            return Err(Error::DegreeNotOdd { degree: p.degree() });
        }
        if !p.lead_witness.verify(&p.coeffs[p.degree()]) {
            return Err(Error::InvalidWitness);
        }
        let m = Rational::from_integer(p.root_bound());
        let certify = |t: &Rational| escalate(fuel, |f| sign_at(p, t, f)).ok_or(Error::FuelExhausted { fuel });
        let lo_sign = certify(&-&m)?;
        let hi_sign = certify(&m)?;
        let first = Bracket { lo: -&m, hi: m, lo_sign, hi_sign };
        Ok(RootIsolator { poly: p.clone(), fuel, brackets: Mutex::new(vec![first]) })
    }

    pub fn polynomial(&self) -> &Polynomial {
        &self.poly
    }

    /// Brackets computed so far, outermost first.
    pub fn brackets(&self) -> Vec<Bracket> {
        self.brackets.lock().expect("bracket list lock").clone()
    }

    /// First bracket of width at most `2/n`; its midpoint is within `1/n` of
    /// the root.
    pub fn bracket_for(&self, n: &Nat) -> Result<Bracket> {
        let target = Rational::new(Int::from(2), Int::from(n.clone()));
        let mut bs = self.brackets.lock().expect("bracket list lock");
        if let Some(b) = bs.iter().find(|b| b.width() <= target) {
            return Ok(b.clone());
        }
        loop {
            let next = self.step(bs.last().expect("at least the initial bracket"))?;
            let done = next.width() <= target;
            bs.push(next);
            if done {
                return Ok(bs.last().expect("just pushed").clone());
            }
        }
    }

    fn step(&self, b: &Bracket) -> Result<Bracket> {
        let w = b.width();
        let three = Int::from(3);
        let points = [b.midpoint(), &b.lo + &w / &three, &b.lo + &w * Int::from(2) / &three];
        let found =
            escalate(self.fuel, |f| points.iter().find_map(|t| sign_at(&self.poly, t, f).map(|c| (t.clone(), c))));
        let Some((t, cert)) = found else {
            return Err(Error::FuelExhausted { fuel: self.fuel << FUEL_ESCALATIONS });
        };
        Ok(match cert.sign() {
            None => Bracket { lo: t.clone(), hi: t, lo_sign: cert.clone(), hi_sign: cert },
            s if s == b.lo_sign.sign() => Bracket { lo: t, lo_sign: cert, ..b.clone() },
            _ => Bracket { hi: t, hi_sign: cert, ..b.clone() },
        })
    }
}

fn escalate<T>(fuel: u32, mut f: impl FnMut(u32) -> Option<T>) -> Option<T> {
    (0..=FUEL_ESCALATIONS).find_map(|j| f(fuel.saturating_mul(1 << j)))
}

/// A real root of an odd-degree polynomial.
///
/// # Panics
///
/// Approximating the result panics if a bisection step cannot certify the
/// sign of `p` at any of its three probe points even with eight times the
/// fuel. [`RootIsolator`] exposes the same computation fallibly.
pub fn root_odd(p: &Polynomial, fuel: u32) -> Result<CauchyReal> {
    let iso = Arc::new(RootIsolator::new(p, fuel)?);
    Ok(CauchyReal::from_approx_fn(move |n| match iso.bracket_for(n) {
        Ok(b) => b.midpoint(),
        Err(e) => panic!("root_odd: {e}; use RootIsolator to handle this case"),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::creal::equiv_up_to;
    use crate::numeric::rat;

    fn poly(cs: &[i64]) -> Polynomial {
        Polynomial::from_rationals(&cs.iter().map(|c| rat(*c, 1)).collect::<Vec<_>>()).unwrap()
    }

    /// Plain bisection on exact rationals, `steps` halvings of `[lo, hi]`.
    fn exact_bisect(cs: &[Rational], mut lo: Rational, mut hi: Rational, steps: usize) -> Rational {
        let ev = |x: &Rational| cs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c);
        let lo_neg = ev(&lo).is_negative();
        for _ in 0..steps {
            let mid = (&lo + &hi) / Int::from(2);
            if ev(&mid).is_negative() == lo_neg {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    #[test]
    fn eval_examples() {
        let p = poly(&[-2, 0, 0, 1]);
        assert!(equiv_up_to(&eval_poly(&p, &CauchyReal::one()), &CauchyReal::from_int(-1), 1000));
        let v = eval_poly(&p, &CauchyReal::from_rational(rat(5, 4)));
        assert_eq!(v.exact(), Some(&rat(-3, 64)));
        let seven = poly(&[7]);
        assert_eq!(eval_poly(&seven, &CauchyReal::from_rational(rat(-9, 2))).exact(), Some(&rat(7, 1)));
    }

    #[test]
    fn root_examples() {
        let r = root_odd(&poly(&[-5, 1]), 20).unwrap();
        assert!(equiv_up_to(&r, &CauchyReal::from_int(5), 1000));

        let r = root_odd(&poly(&[-2, 0, 0, 1]), 20).unwrap();
        let oracle = exact_bisect(&[rat(-2, 1), rat(0, 1), rat(0, 1), rat(1, 1)], rat(1, 1), rat(2, 1), 40);
        assert!((&oracle - rat(1_259_921, 1_000_000)).abs() < rat(1, 1_000_000));
        assert!((r.at(1_000_000) - &oracle).abs() <= rat(1, 1_000_000));

        let r = root_odd(&poly(&[-1, 1, 0, 1]), 20).unwrap();
        let oracle = exact_bisect(&[rat(-1, 1), rat(1, 1), rat(0, 1), rat(1, 1)], rat(0, 1), rat(1, 1), 40);
        assert!((&oracle - rat(682_327, 1_000_000)).abs() < rat(1, 1_000_000));
        assert!((r.at(10_000) - &oracle).abs() <= rat(1, 10_000));
    }

    #[test]
    fn exact_rational_root_collapses() {
        // 2x^3 - x^2: root 0 is hit exactly by the first midpoint
        let p = Polynomial::from_rationals(&[rat(0, 1), rat(0, 1), rat(-1, 1), rat(2, 1)]).unwrap();
        let r = root_odd(&p, 10).unwrap();
        assert_eq!(r.at(1 << 30), rat(0, 1));
        let iso = RootIsolator::new(&p, 10).unwrap();
        let b = iso.bracket_for(&Nat::from(1000u32)).unwrap();
        assert_eq!(b.width(), rat(0, 1));
        assert!(b.verify(&p));
    }

    #[test]
    fn errors() {
        assert_eq!(RootIsolator::new(&poly(&[1, 0, 1]), 10).err(), Some(Error::DegreeNotOdd { degree: 2 }));
        assert_eq!(Polynomial::from_rationals(&[rat(1, 1), rat(0, 1)]).err(), Some(Error::InvalidWitness));
        let bad = ApartnessWitness::new(Nat::from(1u32), Sign::Positive);
        assert_eq!(
            Polynomial::new(vec![CauchyReal::one(), CauchyReal::from_rational(rat(1, 100))], bad).err(),
            Some(Error::InvalidWitness)
        );
    }

    #[test]
    fn brackets_are_nested_and_certified() {
        let p = poly(&[3, -7, 0, 2, 0, 1]);
        let iso = RootIsolator::new(&p, 20).unwrap();
        iso.bracket_for(&Nat::from(1u64 << 20)).unwrap();
        let bs = iso.brackets();
        for pair in bs.windows(2) {
            assert!(pair[0].lo <= pair[1].lo && pair[1].hi <= pair[0].hi);
            assert!(pair[1].width() * Int::from(3) <= pair[0].width() * Int::from(2));
        }
        assert!(bs.iter().all(|b| b.verify(&p)));
    }

    #[test]
    fn inexact_coefficients() {
        // x^3 - sqrt(2): root 2^(1/6)
        let s2 = crate::elem::sqrt_auto(&CauchyReal::from_int(2), 10).unwrap();
        let p = Polynomial::with_fuel(vec![s2.neg(), CauchyReal::zero(), CauchyReal::zero(), CauchyReal::one()], 10)
            .unwrap();
        let r = root_odd(&p, 30).unwrap();
        let oracle = exact_bisect(
            &[rat(-2, 1), rat(0, 1), rat(0, 1), rat(0, 1), rat(0, 1), rat(0, 1), rat(1, 1)],
            rat(1, 1),
            rat(2, 1),
            40,
        );
        assert!((r.at(100_000) - oracle).abs() <= rat(2, 100_000));
    }
}
