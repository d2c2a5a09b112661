//! Evidence engine for A2 sentences `forall x exists y (matrix)`.
//!
//! Universal variables are instantiated with the first `samples` rational
//! tuples in height order. For each sample, every disjunct of the matrix's
//! normal form is searched for a rational witness, first by enumerating
//! tuples by height, then by box refinement over growing cubes. For
//! polynomial matrices a sample can also be refuted outright: each disjunct
//! is shown unsatisfiable over all of `R^m` by an interval exclusion tree.

use std::fmt;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::ast::{A2Sentence, Conjunct, Literal, Relation, Term};
use super::dnf::{to_dnf, DEFAULT_DNF_CAP};
use super::eval::{eval_exact, eval_term_rat, RatEnv};
use crate::algebraic::interval::{enclose, ExtRat, Interval};
use crate::algebraic::{refine_box_with, RatBox, Refinement};
use crate::creal::{compare, CauchyReal, CompareResult, OrderCertificate};
use crate::error::Result;
use crate::numeric::{height, pow2_q, recip_nat, Int, Nat, Rational, RationalTuples};

/// Half-widths of the cubes handed to box refinement, in order.
pub const SEARCH_RADII: [i64; 5] = [1, 4, 16, 64, 256];
/// Nodes per disjunct in a refutation attempt.
pub const EXCLUSION_NODE_CAP: usize = 4096;
/// Nesting depth of an exclusion tree.
pub const EXCLUSION_DEPTH_CAP: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOptions {
    pub budget: u32,
    pub samples: usize,
    pub dnf_cap: usize,
    /// Witness tuples tried by height before box refinement starts.
    pub enumeration_cap: usize,
}

impl CheckOptions {
    pub fn new(budget: u32, samples: usize) -> Self {
        CheckOptions { budget, samples, dnf_cap: DEFAULT_DNF_CAP, enumeration_cap: 2048 }
    }
}

/// Why one literal holds at a rational assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LiteralCert {
    /// Exact value with `|v| < 2^-budget`.
    EqExact(Rational),
    /// `|t(index)| + 1/index < 2^-budget`.
    EqApprox { index: Nat, approx: Rational },
    /// Exact positive value.
    GtExact(Rational),
    /// Certifies `0 < t`.
    GtOrder(OrderCertificate),
}

impl LiteralCert {
    pub fn recheck(&self, lit: &Literal, env: &RatEnv, budget: u32) -> bool {
        let eps = pow2_q(&-Int::from(budget));
        match (self, lit.rel) {
            (LiteralCert::EqExact(v), Relation::Eq) => v.abs() < eps && eval_exact(&lit.term, env).as_ref() == Some(v),
            (LiteralCert::GtExact(v), Relation::Gt) => {
                v.is_positive() && eval_exact(&lit.term, env).as_ref() == Some(v)
            }
            (LiteralCert::EqApprox { index, approx }, Relation::Eq) => {
                let Ok(t) = eval_term_rat(&lit.term, env) else { return false };
                !index.is_zero() && &t.approx(index) == approx && approx.abs() + recip_nat(index) < eps
            }
            (LiteralCert::GtOrder(c), Relation::Gt) => {
                eval_term_rat(&lit.term, env).is_ok_and(|t| c.certifies_less(&CauchyReal::zero(), &t))
            }
            _ => false,
        }
    }
}

impl fmt::Display for LiteralCert {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LiteralCert::EqExact(v) => write!(f, "exact value {v}"),
            LiteralCert::EqApprox { index, approx } => write!(f, "approximation {approx} at index {index}"),
            LiteralCert::GtExact(v) => write!(f, "exact value {v} > 0"),
            LiteralCert::GtOrder(c) => write!(f, "order certificate m={}, k={}", c.m, c.index),
        }
    }
}

/// Certifies `lit` at a rational assignment: equalities need `|t| < 2^-budget`,
/// inequalities a comparison with `0` at fuel `budget`.
pub fn certify_literal(lit: &Literal, env: &RatEnv, budget: u32) -> Option<LiteralCert> {
    let eps = pow2_q(&-Int::from(budget));
    if let Some(v) = eval_exact(&lit.term, env) {
        return match lit.rel {
            Relation::Eq if v.abs() < eps => Some(LiteralCert::EqExact(v)),
            Relation::Gt if v.is_positive() => Some(LiteralCert::GtExact(v)),
            _ => None,
        };
    }
    let t = eval_term_rat(&lit.term, env).ok()?;
    match lit.rel {
        Relation::Eq => {
            let index = Nat::one() << (budget + 2);
            let approx = t.approx(&index);
            (approx.abs() + recip_nat(&index) < eps).then_some(LiteralCert::EqApprox { index, approx })
        }
        Relation::Gt => match compare(&CauchyReal::zero(), &t, budget) {
            CompareResult::Less(c) => Some(LiteralCert::GtOrder(c)),
            _ => None,
        },
    }
}

pub fn certify_conjunct(eqs: &[Term], ineqs: &[Term], env: &RatEnv, budget: u32) -> Option<Vec<LiteralCert>> {
    let eqs = eqs.iter().map(|t| Literal::eq(t.clone()));
    let ineqs = ineqs.iter().map(|t| Literal::gt(t.clone()));
    eqs.chain(ineqs).map(|l| certify_literal(&l, env, budget)).collect()
}

/// Proof that a disjunct has no solution in a region of `R^m`: either some
/// literal's enclosure rules it out, or both halves of a split do.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Exclusion {
    Leaf { literal: usize, enclosure: Interval },
    Split { coord: usize, at: Rational, low: Box<Exclusion>, high: Box<Exclusion> },
}

fn rules_out(lit: &Literal, i: &Interval) -> bool {
    match lit.rel {
        Relation::Eq => !i.contains_zero(),
        Relation::Gt => i.non_positive(),
    }
}

fn enclose_in(t: &Term, vars: &[String], region: &[Interval], env: &RatEnv) -> Option<Interval> {
    let lookup = |v: &str| match vars.iter().position(|n| n == v) {
        Some(j) => Some(region[j].clone()),
        None => env.get(v).cloned().map(Interval::point),
    };
    enclose(t, &lookup)
}

fn split_point(i: &Interval) -> Option<Rational> {
    let two = Int::from(2);
    match (&i.lo, &i.hi) {
        (ExtRat::NegInf, ExtRat::PosInf) => Some(Rational::zero()),
        (ExtRat::NegInf, ExtRat::Fin(b)) => Some(std::cmp::min(b - Rational::one(), b * &two)),
        (ExtRat::Fin(a), ExtRat::PosInf) => Some(std::cmp::max(a + Rational::one(), a * &two)),
        (ExtRat::Fin(a), ExtRat::Fin(b)) if a < b => Some((a + b) / two),
        _ => None,
    }
}

fn width(i: &Interval) -> ExtRat {
    match (&i.lo, &i.hi) {
        (ExtRat::Fin(a), ExtRat::Fin(b)) => ExtRat::Fin(b - a),
        _ => ExtRat::PosInf,
    }
}

fn halves(region: &[Interval], coord: usize, at: &Rational) -> (Vec<Interval>, Vec<Interval>) {
    let mut low = region.to_vec();
    low[coord].hi = ExtRat::Fin(at.clone());
    let mut high = region.to_vec();
    high[coord].lo = ExtRat::Fin(at.clone());
    (low, high)
}

impl Exclusion {
    /// Builds an exclusion tree for `conj` over all of `R^m`.
    pub fn find(conj: &Conjunct, vars: &[String], env: &RatEnv) -> Option<Exclusion> {
        let lits: Vec<Literal> = conj.literals().collect();
        let mut budget = EXCLUSION_NODE_CAP;
        build(&lits, vars, env, &vec![Interval::everything(); vars.len()], &mut budget, EXCLUSION_DEPTH_CAP)
    }

    /// Re-derives every enclosure in the tree.
    pub fn verify(&self, conj: &Conjunct, vars: &[String], env: &RatEnv) -> bool {
        let lits: Vec<Literal> = conj.literals().collect();
        self.verify_in(&lits, vars, env, &vec![Interval::everything(); vars.len()])
    }

    fn verify_in(&self, lits: &[Literal], vars: &[String], env: &RatEnv, region: &[Interval]) -> bool {
        match self {
            Exclusion::Leaf { literal, enclosure } => lits.get(*literal).is_some_and(|l| {
                enclose_in(&l.term, vars, region, env).as_ref() == Some(enclosure) && rules_out(l, enclosure)
            }),
            Exclusion::Split { coord, at, low, high } => {
                if *coord >= region.len() {
                    return false;
                }
                let (lo_region, hi_region) = halves(region, *coord, at);
                let inside = ExtRat::Fin(at.clone());
                region[*coord].lo <= inside
                    && inside <= region[*coord].hi
                    && low.verify_in(lits, vars, env, &lo_region)
                    && high.verify_in(lits, vars, env, &hi_region)
            }
        }
    }
}

fn build(
    lits: &[Literal],
    vars: &[String],
    env: &RatEnv,
    region: &[Interval],
    budget: &mut usize,
    depth: usize,
) -> Option<Exclusion> {
    if *budget == 0 {
        return None;
    }
    *budget -= 1;
    for (literal, l) in lits.iter().enumerate() {
        // sqrt of negatives everywhere cannot arise: refutation is only tried on polynomial matrices
        let enclosure = enclose_in(&l.term, vars, region, env)?;
        if rules_out(l, &enclosure) {
            return Some(Exclusion::Leaf { literal, enclosure });
        }
    }
    let mut best: Option<(usize, ExtRat)> = None;
    for (j, side) in region.iter().enumerate() {
        let w = width(side);
        if w > ExtRat::Fin(Rational::zero()) && best.as_ref().is_none_or(|(_, b)| &w > b) {
            best = Some((j, w));
        }
    }
    let (coord, _) = best.filter(|_| depth > 0)?;
    let at = split_point(&region[coord])?;
    let (lo_region, hi_region) = halves(region, coord, &at);
    let low = build(lits, vars, env, &lo_region, budget, depth - 1)?;
    let high = build(lits, vars, env, &hi_region, budget, depth - 1)?;
    Some(Exclusion::Split { coord, at, low: Box::new(low), high: Box::new(high) })
}

/// How a witness was found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessSource {
    /// The `rank`-th tuple in height order.
    Enumeration { rank: usize },
    /// A grid point from refining `[-radius, radius]^m`, inside `subbox`.
    Refinement { radius: i64, subbox: RatBox },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessRow {
    pub sample: usize,
    pub outer: Vec<(String, Rational)>,
    pub conjunct: usize,
    pub witness: Vec<(String, Rational)>,
    pub certs: Vec<LiteralCert>,
    pub source: WitnessSource,
}

impl WitnessRow {
    fn env(&self) -> RatEnv {
        self.outer.iter().chain(&self.witness).cloned().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// At `counterexample`, every disjunct is excluded over all existential values.
    Refuted { sample: usize, counterexample: Vec<(String, Rational)>, exclusions: Vec<Exclusion> },
    /// Every sampled universal tuple got a certified witness.
    WitnessFound { rows: Vec<WitnessRow> },
    /// Some samples got neither a witness nor a refutation.
    Unknown { rows: Vec<WitnessRow>, unresolved: Vec<Vec<(String, Rational)>> },
}

impl Verdict {
    pub fn semantics(&self) -> &'static str {
        match self {
            Verdict::Refuted { .. } => {
                "refuted: at the counterexample no choice of the existential variables satisfies the matrix (certified by interval exclusion)"
            }
            Verdict::WitnessFound { .. } => {
                "witnesses found for every sampled universal tuple; this is evidence, not proof, for the universal quantifier"
            }
            Verdict::Unknown { .. } => "unknown: some samples were neither witnessed nor refuted within the budget",
        }
    }

    /// Re-checks every attached certificate against the sentence.
    pub fn recheck(&self, s: &A2Sentence, opts: &CheckOptions) -> bool {
        let Ok(dnf) = to_dnf(&s.matrix, opts.dnf_cap) else { return false };
        let rows_ok = |rows: &[WitnessRow]| {
            rows.iter().all(|r| {
                let Some(conj) = dnf.conjuncts.get(r.conjunct) else { return false };
                let env = r.env();
                let lits: Vec<Literal> = conj.literals().collect();
                lits.len() == r.certs.len() && lits.iter().zip(&r.certs).all(|(l, c)| c.recheck(l, &env, opts.budget))
            })
        };
        match self {
            Verdict::Refuted { counterexample, exclusions, .. } => {
                let env: RatEnv = counterexample.iter().cloned().collect();
                exclusions.len() == dnf.conjuncts.len()
                    && dnf.conjuncts.iter().zip(exclusions).all(|(c, e)| e.verify(c, &s.existentials, &env))
            }
            Verdict::WitnessFound { rows } | Verdict::Unknown { rows, .. } => rows_ok(rows),
        }
    }
}

enum SampleOutcome {
    Witness(WitnessRow),
    Refuted(Vec<Exclusion>),
    Open,
}

/// Checks `s` with default options for everything but budget and samples.
pub fn check_sentence(s: &A2Sentence, budget: u32, samples: usize) -> Result<Verdict> {
    check_sentence_with(s, &CheckOptions::new(budget, samples))
}

pub fn check_sentence_with(s: &A2Sentence, opts: &CheckOptions) -> Result<Verdict> {
    let budget = opts.budget.max(1);
    let dnf = to_dnf(&s.matrix, opts.dnf_cap)?;
    let polynomial = dnf.conjuncts.iter().all(Conjunct::is_polynomial);
    let tuples: Vec<Vec<Rational>> = RationalTuples::new(s.universals.len()).take(opts.samples.max(1)).collect();
    let outcomes: Vec<(Vec<(String, Rational)>, SampleOutcome)> = tuples
        .into_par_iter()
        .enumerate()
        .map(|(sample, tuple)| {
            let outer: Vec<(String, Rational)> = s.universals.iter().cloned().zip(tuple).collect();
            let outcome = run_sample(sample, &outer, s, &dnf.conjuncts, polynomial, budget, opts.enumeration_cap);
            (outer, outcome)
        })
        .collect();

    let mut rows = Vec::new();
    let mut unresolved = Vec::new();
    for (sample, (outer, outcome)) in outcomes.into_iter().enumerate() {
        match outcome {
            SampleOutcome::Refuted(exclusions) => {
                return Ok(Verdict::Refuted { sample, counterexample: outer, exclusions })
            }
            SampleOutcome::Witness(row) => rows.push(row),
            SampleOutcome::Open => unresolved.push(outer),
        }
    }
    Ok(if unresolved.is_empty() { Verdict::WitnessFound { rows } } else { Verdict::Unknown { rows, unresolved } })
}

fn run_sample(
    sample: usize,
    outer: &[(String, Rational)],
    s: &A2Sentence,
    conjuncts: &[Conjunct],
    polynomial: bool,
    budget: u32,
    enumeration_cap: usize,
) -> SampleOutcome {
    let env: RatEnv = outer.iter().cloned().collect();
    let m = s.existentials.len();
    let row = |conjunct: usize, point: Vec<Rational>, certs, source| WitnessRow {
        sample,
        outer: outer.to_vec(),
        conjunct,
        witness: s.existentials.iter().cloned().zip(point).collect(),
        certs,
        source,
    };
    let with_point = |point: &[Rational]| {
        let mut e = env.clone();
        e.extend(s.existentials.iter().cloned().zip(point.iter().cloned()));
        e
    };

    let max_height = Nat::one() << budget;
    let candidates: Vec<Vec<Rational>> = RationalTuples::new(m)
        .take(enumeration_cap)
        .take_while(|t| t.iter().all(|q| height(q) <= max_height))
        .collect();
    for (ci, conj) in conjuncts.iter().enumerate() {
        for (rank, point) in candidates.iter().enumerate() {
            if let Some(certs) = certify_conjunct(&conj.equalities, &conj.inequalities, &with_point(point), budget) {
                return SampleOutcome::Witness(row(ci, point.clone(), certs, WitnessSource::Enumeration { rank }));
            }
        }
    }

    if polynomial {
        let exclusions: Option<Vec<Exclusion>> =
            conjuncts.iter().map(|c| Exclusion::find(c, &s.existentials, &env)).collect();
        if let Some(exclusions) = exclusions {
            return SampleOutcome::Refuted(exclusions);
        }
    }

    if m == 0 {
        return SampleOutcome::Open;
    }
    for (ci, conj) in conjuncts.iter().enumerate() {
        for radius in SEARCH_RADII {
            let b = RatBox::cube(m, Rational::from_integer(Int::from(radius)));
            let found = refine_box_with(&conj.equalities, &conj.inequalities, &s.existentials, &env, &b, budget);
            if let Ok(Refinement::Subbox { subbox, point, .. }) = found {
                if let Some(certs) = certify_conjunct(&conj.equalities, &conj.inequalities, &with_point(&point), budget)
                {
                    return SampleOutcome::Witness(row(ci, point, certs, WitnessSource::Refinement { radius, subbox }));
                }
            }
        }
    }
    SampleOutcome::Open
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let assign =
            |xs: &[(String, Rational)]| xs.iter().map(|(v, q)| format!("{v} = {q}")).collect::<Vec<_>>().join(", ");
        match self {
            Verdict::Refuted { counterexample, exclusions, .. } => {
                writeln!(f, "Refuted")?;
                writeln!(
                    f,
                    "counterexample: {}",
                    if counterexample.is_empty() { "(none needed)".into() } else { assign(counterexample) }
                )?;
                for (i, e) in exclusions.iter().enumerate() {
                    match e {
                        Exclusion::Leaf { literal, enclosure } => {
                            writeln!(f, "disjunct {i}: literal {literal} ruled out, value in {enclosure}")?
                        }
                        Exclusion::Split { .. } => {
                            writeln!(f, "disjunct {i}: ruled out by an interval exclusion tree")?
                        }
                    }
                }
            }
            Verdict::WitnessFound { rows } | Verdict::Unknown { rows, .. } => {
                let title = if matches!(self, Verdict::WitnessFound { .. }) { "WitnessFound" } else { "Unknown" };
                writeln!(f, "{title}")?;
                for r in rows {
                    let outer = if r.outer.is_empty() { String::new() } else { format!("{}: ", assign(&r.outer)) };
                    writeln!(f, "{outer}{} (disjunct {})", assign(&r.witness), r.conjunct)?;
                }
                if let Verdict::Unknown { unresolved, .. } = self {
                    for u in unresolved {
                        writeln!(
                            f,
                            "unresolved: {}",
                            if u.is_empty() { "(no universal variables)".into() } else { assign(u) }
                        )?;
                    }
                }
            }
        }
        write!(f, "{}", self.semantics())
    }
}
