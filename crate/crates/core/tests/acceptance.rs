//! Acceptance suite: one PASS/FAIL line per criterion.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use kreal::algebraic::{root_odd, Polynomial};
use kreal::creal::{compare, equiv_up_to, CauchyReal, CompareResult};
use kreal::elem::{appr, exp2, exp2_rat, sqrt_auto};
use kreal::lexp::eval::{dnf_holds_exact, formula_holds_exact, RatEnv};
use kreal::lexp::{check_sentence, parse_sentence, to_dnf, CheckOptions, Formula, Literal, Term, Verdict};
use kreal::numeric::{floor_q, rat, recip_nat, Int, Nat, Rational};
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome { ok: true, detail: detail.into() }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome { ok: false, detail: detail.into() }
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut out = f();
    let took = start.elapsed();
    if let Some(limit) = limit {
        if took >= limit && out.ok {
            out = fail(format!("{}; took {:.2?}, limit {:.0?}", out.detail, took, limit));
        }
    }
    out.detail = format!("{} [{:.2?}]", out.detail, took);
    out
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_rational(r: &mut ChaCha8Rng, max_num: i64, max_den: i64) -> Rational {
    rat(r.gen_range(-max_num..=max_num), r.gen_range(1..=max_den))
}

/// `floor(4i * 2^(p/q)) / (4i)` via `num-bigint`'s nth root.
fn appr_oracle(p: i64, q: u32, i: u64) -> Rational {
    let scale = Nat::from(4 * i);
    let pow = num_traits::pow(scale.clone(), q as usize);
    let two_p = Nat::from(1u8) << p.unsigned_abs();
    let inner = if p >= 0 { pow * two_p } else { pow / two_p };
    Rational::new(Int::from(inner.nth_root(q)), Int::from(scale))
}

/// `|v - 2^(p/q)| <= 1/i`, given the oracle value `o <= 2^(p/q) < o + 1/(4i)`.
fn within_one_over_i(v: &Rational, o: &Rational, i: u64) -> bool {
    let (quarter, whole) = (rat(1, 4 * i as i64), rat(1, i as i64));
    *v <= o + &whole && *v >= o + quarter - whole
}

fn appr_accuracy() -> Outcome {
    let mut r = rng(1);
    let i = 1u64 << 20;
    for _ in 0..50 {
        let q: u32 = r.gen_range(1..=24);
        let p: i64 = r.gen_range(-8 * q as i64..=8 * q as i64);
        let v = exp2_rat(&Int::from(p), q).unwrap().at(i);
        if !within_one_over_i(&v, &appr_oracle(p, q, i), i) {
            return fail(format!("2^({p}/{q}) at i=2^20 off by more than 1/i"));
        }
    }
    pass("50 exponents p/q with |p/q| <= 8 within 1/i at i = 2^20")
}

fn fixed_values() -> Outcome {
    let a = appr(&Nat::from(100u32), &Nat::from(2u32), 2).unwrap();
    if a != Nat::from(141u32) {
        return fail(format!("appr(100,2,2) = {a}"));
    }
    // brute force: largest m with m^2 <= 20000
    let brute = (0u32..).take_while(|m| m * m <= 20_000).last().unwrap();
    if a != Nat::from(brute) {
        return fail("appr disagrees with brute force");
    }
    let v = exp2_rat(&Int::from(1), 2).unwrap().at(100);
    if v != rat(141, 100) {
        return fail(format!("exp2_rat(1,2).approx(100) = {v}"));
    }
    for k in 0..=10u32 {
        let e = exp2(&CauchyReal::from_int(k));
        for n in [1u64, 3, 100, 1 << 40] {
            if e.at(n) != Rational::from_integer(Int::from(1u64 << k)) {
                return fail(format!("exp2({k}) at {n} is {}", e.at(n)));
            }
        }
    }
    pass("appr(100,2,2) = 141, exp2_rat(1,2)(100) = 141/100, exp2(0..10) exact")
}

fn sqrt_bound() -> Outcome {
    let mut r = rng(3);
    let n = 10_000u64;
    for _ in 0..100 {
        let x = rat(r.gen_range(1..=100_000), r.gen_range(1..=1000));
        let s = sqrt_auto(&CauchyReal::from_rational(x.clone()), 64).unwrap();
        let q = Rational::from_integer(s.at(n).denom().clone());
        let err = (s.square().at(n) - &x).abs();
        let bound = rat(3, 1) / q + rat(2, n as i64);
        if err > bound {
            return fail(format!("sqrt({x}): error {err} exceeds {bound}"));
        }
    }
    pass("100 positive rationals, |sqrt(x)^2 - x| <= 3/q + 2/n at n = 10^4")
}

fn random_real(r: &mut ChaCha8Rng) -> CauchyReal {
    let q = random_rational(r, 40, 9);
    match r.gen_range(0..3) {
        0 => CauchyReal::from_rational(q),
        1 => sqrt_auto(&CauchyReal::from_rational(q.abs() + rat(1, 5)), 64).unwrap(),
        _ => exp2(&CauchyReal::from_rational(random_rational(r, 30, 7))),
    }
}

fn field_laws() -> Outcome {
    let mut r = rng(4);
    let n = 10_000;
    for t in 0..200 {
        let (x, y, z) = (random_real(&mut r), random_real(&mut r), random_real(&mut r));
        let laws = [
            ("add assoc", equiv_up_to(&x.add(&y).add(&z), &x.add(&y.add(&z)), n)),
            ("mul assoc", equiv_up_to(&x.mul(&y).mul(&z), &x.mul(&y.mul(&z)), n)),
            ("add comm", equiv_up_to(&x.add(&y), &y.add(&x), n)),
            ("mul comm", equiv_up_to(&x.mul(&y), &y.mul(&x), n)),
            ("distrib", equiv_up_to(&x.mul(&y.add(&z)), &x.mul(&y).add(&x.mul(&z)), n)),
            ("add id", equiv_up_to(&x.add(&CauchyReal::zero()), &x, n)),
            ("mul id", equiv_up_to(&x.mul(&CauchyReal::one()), &x, n)),
            ("add inv", equiv_up_to(&x.add(&x.neg()), &CauchyReal::zero(), n)),
        ];
        if let Some((name, _)) = laws.iter().find(|(_, ok)| !ok) {
            return fail(format!("triple {t}: {name} failed"));
        }
        if let Some(w) = x.apartness(30) {
            if !equiv_up_to(&x.mul(&x.inverse(&w).unwrap()), &CauchyReal::one(), n) {
                return fail(format!("triple {t}: mul inv failed"));
            }
        }
    }
    let minus_one = CauchyReal::from_int(-1);
    for t in 0..100 {
        let total = (0..4).map(|_| random_real(&mut r).square()).fold(CauchyReal::zero(), |a, s| a.add(&s));
        let c = compare(&total, &minus_one, 10);
        if !c.is_greater() || !c.recheck(&total, &minus_one) {
            return fail(format!("sum of squares trial {t}: {c:?}"));
        }
    }
    pass("200 triples satisfy the field laws at n = 10^4; 100 sums of four squares > -1")
}

/// Certifies `k <= x < k + 1`.
fn floor_certified(x: &CauchyReal, k: &Int) -> bool {
    let kr = Rational::from_integer(k.clone());
    let k1 = &kr + rat(1, 1);
    if let Some(q) = x.exact() {
        return kr <= *q && *q < k1;
    }
    let (lo, hi) = (CauchyReal::from_rational(kr), CauchyReal::from_rational(k1));
    let below = compare(&lo, x, 60);
    let above = compare(x, &hi, 60);
    below.is_less() && below.recheck(&lo, x) && above.is_less() && above.recheck(x, &hi)
}

fn floor_certificates() -> Outcome {
    let mut r = rng(5);
    for _ in 0..500 {
        let q = random_rational(&mut r, 100_000, 997);
        let x = CauchyReal::from_rational(q.clone());
        let k = x.floor(1).unwrap();
        if k != floor_q(&q) || !floor_certified(&x, &k) {
            return fail(format!("floor({q}) = {k}"));
        }
    }
    for _ in 0..50 {
        let q = rat(r.gen_range(1..=1_000_000), r.gen_range(1..=50));
        let x = sqrt_auto(&CauchyReal::from_rational(q.clone()), 64).unwrap();
        match x.floor(60) {
            Ok(k) if floor_certified(&x, &k) => {}
            other => return fail(format!("floor(sqrt({q})) gave {other:?}")),
        }
    }
    let s2 = sqrt_auto(&CauchyReal::from_int(2), 64).unwrap();
    if s2.floor(60).ok() != Some(Int::from(1)) {
        return fail("floor(sqrt 2) != 1");
    }
    for k in [-7i64, 0, 12, 1 << 40] {
        if CauchyReal::from_int(k).floor(0).ok() != Some(Int::from(k)) {
            return fail(format!("floor({k}) not exact"));
        }
    }
    pass("500 rationals and 50 square roots floored with certificates; floor(sqrt 2) = 1")
}

fn exact_poly(cs: &[Rational], x: &Rational) -> Rational {
    cs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

/// Bisection over exact rationals down to width `eps`.
fn bisect(cs: &[Rational], mut lo: Rational, mut hi: Rational, eps: &Rational) -> Rational {
    let lo_sign = exact_poly(cs, &lo).is_negative();
    while &(&hi - &lo) > eps {
        let mid = (&lo + &hi) / Int::from(2);
        if exact_poly(cs, &mid).is_negative() == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

fn odd_roots() -> Outcome {
    let mut r = rng(6);
    let tol = rat(1, 1_000_000);
    for _ in 0..50 {
        let mut cs: Vec<Rational> = (0..3).map(|_| rat(r.gen_range(-10..=10), 1)).collect();
        cs.push(rat(1, 1));
        let p = Polynomial::from_rationals(&cs).unwrap();
        let m = Rational::from_integer(p.root_bound());
        let lip = cs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.abs() * Int::from(i) * num_traits::pow(m.clone(), i - 1))
            .fold(Rational::zero(), |a, b| a + b);
        // matching precision: Lipschitz bound times 1/n stays under tol
        let n = (lip / &tol).ceil().to_integer().to_u64().unwrap().max(1) + 1;
        let root = root_odd(&p, 30).unwrap().at(n);
        let res = exact_poly(&cs, &root).abs();
        if res > tol {
            return fail(format!("cubic {cs:?}: |p(root)| = {res}"));
        }
    }
    let cube = [rat(-2, 1), rat(0, 1), rat(0, 1), rat(1, 1)];
    let p = Polynomial::from_rationals(&cube).unwrap();
    let got = root_odd(&p, 30).unwrap().at(10_000_000);
    let oracle = bisect(&cube, rat(1, 1), rat(2, 1), &rat(1, 1_000_000_000));
    if (&got - &oracle).abs() > rat(1, 5_000_000) || (&got - rat(1_259_921, 1_000_000)).abs() > tol {
        return fail(format!("cube root of 2 approximated as {got}, bisection gives {oracle}"));
    }
    pass("50 monic cubics with exact |p(root)| <= 1e-6; cube root of 2 within 1e-6 of 1.259921")
}

fn exp2_monotone() -> Outcome {
    let mut r = rng(7);
    for _ in 0..100 {
        let a = random_rational(&mut r, 64, 12);
        let b = &a + rat(r.gen_range(1..=40), r.gen_range(1..=12));
        let ea = exp2_rat(a.numer(), a.denom().to_u32().unwrap()).unwrap();
        let eb = exp2_rat(b.numer(), b.denom().to_u32().unwrap()).unwrap();
        let c = compare(&ea, &eb, 64);
        if !matches!(c, CompareResult::Less(_)) || !c.recheck(&ea, &eb) {
            return fail(format!("2^{a} vs 2^{b}: {c:?}"));
        }
    }
    // the image of an inexact real honours the modulus
    for _ in 0..100 {
        let v = random_rational(&mut r, 80, 16);
        let w = v.clone();
        let x = CauchyReal::from_approx_fn(move |k| &w - recip_nat(k) / Int::from(3));
        let n = r.gen_range(1u64..=1 << 20);
        let e = exp2(&x).at(n);
        let o = exp2_rat(v.numer(), v.denom().to_u32().unwrap()).unwrap().at(4 * n);
        if !within_one_over_i(&e, &o, n) {
            return fail(format!("exp2 of blurred {v} at {n} outside the modulus"));
        }
    }
    // sqrt(2) sits between 1414/1000 and 1415/1000, so its image does too
    let s = exp2(&sqrt_auto(&CauchyReal::from_int(2), 64).unwrap());
    let lo = exp2_rat(&Int::from(707), 500).unwrap();
    let hi = exp2_rat(&Int::from(283), 200).unwrap();
    if !compare(&lo, &s, 64).is_less() || !compare(&s, &hi, 64).is_less() {
        return fail("2^sqrt(2) escapes its rational sandwich");
    }
    pass("100 ordered pairs map to certified Less; 100 inexact images within 1/n")
}

fn random_term(r: &mut ChaCha8Rng, depth: u32) -> Term {
    if depth == 0 || r.gen_bool(0.3) {
        return if r.gen_bool(0.5) {
            Term::Const(random_rational(r, 9, 4))
        } else {
            Term::var(["x", "y", "z"][r.gen_range(0..3)])
        };
    }
    let a = Box::new(random_term(r, depth - 1));
    match r.gen_range(0..4) {
        0 => Term::Add(a, Box::new(random_term(r, depth - 1))),
        1 => Term::Sub(a, Box::new(random_term(r, depth - 1))),
        2 => Term::Mul(a, Box::new(random_term(r, depth - 1))),
        _ => Term::Neg(a),
    }
}

fn random_formula(r: &mut ChaCha8Rng, depth: u32) -> Formula {
    if depth == 0 || r.gen_bool(0.25) {
        let t = random_term(r, 3);
        return Formula::Atom(if r.gen_bool(0.5) { Literal::eq(t) } else { Literal::gt(t) });
    }
    match r.gen_range(0..3) {
        0 => Formula::Not(Box::new(random_formula(r, depth - 1))),
        1 => Formula::And(Box::new(random_formula(r, depth - 1)), Box::new(random_formula(r, depth - 1))),
        _ => Formula::Or(Box::new(random_formula(r, depth - 1)), Box::new(random_formula(r, depth - 1))),
    }
}

fn dnf_equivalence() -> Outcome {
    let mut r = rng(8);
    let mut assignments = 0;
    for i in 0..500 {
        let f = random_formula(&mut r, 4);
        let d = match to_dnf(&f, 1 << 16) {
            Ok(d) => d,
            Err(e) => return fail(format!("formula {i}: {e}")),
        };
        for _ in 0..8 {
            // small integers hit the equality literals, fractions the rest
            let mut env = RatEnv::new();
            for v in ["x", "y", "z"] {
                let q = if r.gen_bool(0.5) { rat(r.gen_range(-2..=2), 1) } else { random_rational(&mut r, 12, 5) };
                env.insert(v.to_string(), q);
            }
            let want = formula_holds_exact(&f, &env);
            if want.is_none() || want != dnf_holds_exact(&d, &env) {
                return fail(format!("formula {i} ({f}) disagrees with its DNF"));
            }
            assignments += 1;
        }
    }
    pass(format!("500 random formulas agree with their DNF on {assignments} assignments"))
}

fn checker() -> Outcome {
    // verdict, whether a second run agrees, and whether its certificates recheck
    let run = |src: &str, budget: u32, samples: usize| {
        let s = parse_sentence(src).unwrap();
        let a = check_sentence(&s, budget, samples).unwrap();
        let b = check_sentence(&s, budget, samples).unwrap();
        let sound = a.recheck(&s, &CheckOptions::new(budget, samples));
        (a == b && sound, a)
    };

    let (ok1, v1) = run("forall x exists y (y+x=0)", 10, 50);
    let Verdict::WitnessFound { rows } = &v1 else { return fail(format!("inverse: {v1}")) };
    if rows.len() != 50 {
        return fail(format!("inverse: {} witness rows", rows.len()));
    }

    let (ok2, v2) = run("forall x (x·x > 1)", 10, 50);
    let Verdict::Refuted { counterexample, .. } = &v2 else { return fail(format!("square: {v2}")) };
    if counterexample != &vec![("x".to_string(), rat(0, 1))] {
        return fail(format!("square: counterexample {counterexample:?}"));
    }

    let (ok3, v3) = run("exists y (y·y·y = 2)", 24, 1);
    let Verdict::WitnessFound { rows } = &v3 else { return fail(format!("cube: {v3}")) };
    let y = &rows[0].witness[0].1;
    let err = (y * y * y - rat(2, 1)).abs();
    if err >= Rational::new(Int::from(1), Int::from(1u64 << 20)) {
        return fail(format!("cube: witness {y} has |y^3 - 2| = {err}"));
    }

    if !(ok1 && ok2 && ok3) {
        return fail("verdicts differ between runs or certificates do not recheck");
    }
    pass(format!("inverse witnessed on 50 samples, x*x > 1 refuted at x = 0, cube root witness {y}"))
}

type Criterion = (&'static str, Option<u64>, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: Vec<Criterion> = vec![
        ("appr accuracy", Some(10), appr_accuracy),
        ("fixed values", None, fixed_values),
        ("sqrt bound", Some(5), sqrt_bound),
        ("ordered field laws", None, field_laws),
        ("floor certificates", None, floor_certificates),
        ("odd-root residual", Some(30), odd_roots),
        ("exp2 monotonicity and continuity", None, exp2_monotone),
        ("DNF equivalence", None, dnf_equivalence),
        ("checker end-to-end", Some(60), checker),
    ];
    let mut failed = 0;
    for (name, limit, f) in criteria {
        let out = timed(limit.map(Duration::from_secs), f);
        if !out.ok {
            failed += 1;
        }
        println!("{} {name}: {}", if out.ok { "PASS" } else { "FAIL" }, out.detail);
    }
    println!("{} criteria failed", failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
