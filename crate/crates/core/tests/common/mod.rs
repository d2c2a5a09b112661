#![allow(dead_code)]

use kreal::creal::CauchyReal;
use kreal::elem::{exp2, sqrt_auto};
use kreal::numeric::{rat, recip_nat, Int, Nat, Rational};
use num_traits::Signed;
use proptest::prelude::*;

pub fn rational(max_num: i64, max_den: i64) -> impl Strategy<Value = Rational> {
    (-max_num..=max_num, 1..=max_den).prop_map(|(n, d)| rat(n, d))
}

pub fn positive_rational(max_num: i64, max_den: i64) -> impl Strategy<Value = Rational> {
    (1..=max_num, 1..=max_den).prop_map(|(n, d)| rat(n, d))
}

/// A real that is not flagged exact: approximations sit `1/(3k)` below `v`.
pub fn blurred(v: Rational) -> CauchyReal {
    CauchyReal::from_approx_fn(move |k| &v - recip_nat(k) / Int::from(3))
}

/// Recipe for a real built from rationals with the library's operations.
#[derive(Debug, Clone)]
pub enum Recipe {
    Exact(Rational),
    Blurred(Rational),
    Sqrt(Rational),
    Exp2(Rational),
    Add(Box<Recipe>, Box<Recipe>),
    Mul(Box<Recipe>, Box<Recipe>),
    Neg(Box<Recipe>),
}

impl Recipe {
    pub fn build(&self) -> CauchyReal {
        match self {
            Recipe::Exact(q) => CauchyReal::from_rational(q.clone()),
            Recipe::Blurred(q) => blurred(q.clone()),
            Recipe::Sqrt(q) => sqrt_auto(&CauchyReal::from_rational(q.abs() + rat(1, 7)), 64).unwrap(),
            Recipe::Exp2(q) => exp2(&blurred(q.clone())),
            Recipe::Add(a, b) => a.build().add(&b.build()),
            Recipe::Mul(a, b) => a.build().mul(&b.build()),
            Recipe::Neg(a) => a.build().neg(),
        }
    }
}

pub fn leaf() -> impl Strategy<Value = Recipe> {
    prop_oneof![
        rational(50, 9).prop_map(Recipe::Exact),
        rational(50, 9).prop_map(Recipe::Blurred),
        rational(50, 9).prop_map(Recipe::Sqrt),
        rational(24, 6).prop_map(Recipe::Exp2),
    ]
}

pub fn recipe() -> impl Strategy<Value = Recipe> {
    leaf().prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Recipe::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Recipe::Mul(Box::new(a), Box::new(b))),
            inner.prop_map(|a| Recipe::Neg(Box::new(a))),
        ]
    })
}

pub const INDICES: [u64; 7] = [1, 2, 3, 7, 10, 100, 1000];

/// `|x(n) - x(m)| <= 1/n + 1/m` over [`INDICES`].
pub fn satisfies_modulus(x: &CauchyReal) -> bool {
    let approx: Vec<Rational> = INDICES.iter().map(|n| x.at(*n)).collect();
    for (i, n) in INDICES.iter().enumerate() {
        for (j, m) in INDICES.iter().enumerate() {
            let bound = recip_nat(&Nat::from(*n)) + recip_nat(&Nat::from(*m));
            if (&approx[i] - &approx[j]).abs() > bound {
                return false;
            }
        }
    }
    true
}
