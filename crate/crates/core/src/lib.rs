//! Exact real arithmetic with computable Cauchy reals: rational approximations
//! with an explicit modulus, square roots, base-2 exponentiation, odd-degree
//! polynomial roots, and a small checker for A2 sentences over the ordered
//! exponential field.

pub mod algebraic;
pub mod creal;
pub mod elem;
pub mod error;
pub mod lexp;
pub mod numeric;

pub use algebraic::{eval_poly, refine_box, root_odd, Polynomial, RatBox, Refinement, RootIsolator};
pub use creal::{compare, equiv_up_to, ApartnessWitness, CauchyReal, CompareResult, OrderCertificate, Sign};
pub use elem::{appr, exp2, exp2_rat, sqrt, sqrt_auto, SqrtCert};
pub use error::{Error, Result};
pub use lexp::{check_sentence, parse_sentence, parse_term, to_dnf, Verdict};
