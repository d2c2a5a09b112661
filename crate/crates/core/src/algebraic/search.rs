//! Refinement of rational boxes towards common approximate zeros.
//!
//! Each half-subbox is searched by branch and bound: a region is dropped when
//! an interval enclosure shows some equation stays at least `2^-budget` away
//! from zero (or some inequality stays non-positive), or when it holds no
//! rational with denominator at most `2^budget`. Otherwise its simplest point
//! is tested and the widest side is split into `(lo, s)`, `{s}`, `(s, hi)`
//! around that point.

use std::fmt;

use num_traits::{One, Zero};

use super::interval::{enclose, Interval};
use crate::error::{Error, Result};
use crate::lexp::check::certify_conjunct;
use crate::lexp::{RatEnv, Term};
use crate::numeric::{denom_nat, pow2_q, simplest_in, End, Int, Nat, Rational};

/// Regions examined per subbox before the search gives up.
pub const NODE_CAP: usize = 200_000;

/// A product of closed rational intervals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatBox {
    sides: Vec<(Rational, Rational)>,
}

impl RatBox {
    pub fn new(sides: Vec<(Rational, Rational)>) -> Result<Self> {
        if let Some(index) = sides.iter().position(|(lo, hi)| lo > hi) {
            return Err(Error::InvalidBox { index });
        }
        Ok(RatBox { sides })
    }

    /// `[-r, r]^dim`.
    pub fn cube(dim: usize, r: Rational) -> Self {
        RatBox { sides: vec![(-r.clone(), r); dim] }
    }

    pub fn sides(&self) -> &[(Rational, Rational)] {
        &self.sides
    }

    pub fn dim(&self) -> usize {
        self.sides.len()
    }

    pub fn contains(&self, point: &[Rational]) -> bool {
        point.len() == self.dim() && self.sides.iter().zip(point).all(|((lo, hi), x)| lo <= x && x <= hi)
    }

    /// The `2^dim` closed half-boxes in lexicographic order, lower halves
    /// first and the first side most significant.
    pub fn halves(&self) -> Vec<RatBox> {
        let m = self.dim();
        let two = Int::from(2);
        (0..1usize << m)
            .map(|idx| {
                let sides = self
                    .sides
                    .iter()
                    .enumerate()
                    .map(|(j, (lo, hi))| {
                        let mid = (lo + hi) / &two;
                        if idx >> (m - 1 - j) & 1 == 0 {
                            (lo.clone(), mid)
                        } else {
                            (mid, hi.clone())
                        }
                    })
                    .collect();
                RatBox { sides }
            })
            .collect()
    }
}

impl fmt::Display for RatBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sides.is_empty() {
            return write!(f, "[]");
        }
        let parts: Vec<String> = self.sides.iter().map(|(lo, hi)| format!("[{lo}, {hi}]")).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Refinement {
    /// The first qualifying half-subbox, its position among the halves, and a
    /// qualifying grid point inside it.
    Subbox { index: usize, subbox: RatBox, point: Vec<Rational> },
    /// No grid point of any half qualifies at this budget. This says nothing
    /// about exact solutions off the grid.
    NoCandidate,
    /// The half at `index` exhausted [`NODE_CAP`] before being settled.
    Inconclusive { index: usize },
}

/// First half of `b` holding a grid point (denominators up to `2^budget`)
/// where every `|t|` for `t` in `ts` certifiably evaluates below
/// `2^-budget`. `vars` names the box coordinates; `env` fixes any other
/// variables.
pub fn refine_box(ts: &[Term], vars: &[String], env: &RatEnv, b: &RatBox, budget: u32) -> Result<Refinement> {
    refine_box_with(ts, &[], vars, env, b, budget)
}

/// [`refine_box`] with additional strict inequalities `t > 0`, each
/// certified by comparison with fuel `budget`.
pub fn refine_box_with(
    eqs: &[Term],
    ineqs: &[Term],
    vars: &[String],
    env: &RatEnv,
    b: &RatBox,
    budget: u32,
) -> Result<Refinement> {
    if budget == 0 {
        return Err(Error::ZeroPrecision);
    }
    if b.dim() != vars.len() {
        return Err(Error::BoxArity { expected: vars.len(), got: b.dim() });
    }
    let grid = Grid { eqs, ineqs, vars, env, budget, max_den: Nat::one() << budget, eps: pow2_q(&-Int::from(budget)) };
    for (index, sub) in b.halves().into_iter().enumerate() {
        match grid.search(&sub) {
            Outcome::Found(point) => return Ok(Refinement::Subbox { index, subbox: sub, point }),
            Outcome::Empty => {}
            Outcome::Capped => return Ok(Refinement::Inconclusive { index }),
        }
    }
    Ok(Refinement::NoCandidate)
}

enum Outcome {
    Found(Vec<Rational>),
    Empty,
    Capped,
}

#[derive(Clone)]
struct Side {
    lo: Rational,
    lo_open: bool,
    hi: Rational,
    hi_open: bool,
}

impl Side {
    fn simplest(&self) -> Option<Rational> {
        let lo = if self.lo_open { End::Open(self.lo.clone()) } else { End::Closed(self.lo.clone()) };
        let hi = if self.hi_open { End::Open(self.hi.clone()) } else { End::Closed(self.hi.clone()) };
        simplest_in(&lo, &hi)
    }
}

struct Grid<'a> {
    eqs: &'a [Term],
    ineqs: &'a [Term],
    vars: &'a [String],
    env: &'a RatEnv,
    budget: u32,
    max_den: Nat,
    eps: Rational,
}

impl Grid<'_> {
    fn excluded(&self, region: &[Side]) -> bool {
        let lookup = |v: &str| match self.vars.iter().position(|n| n == v) {
            Some(j) => Some(Interval::closed(region[j].lo.clone(), region[j].hi.clone())),
            None => self.env.get(v).cloned().map(Interval::point),
        };
        let eq_out = self.eqs.iter().any(|t| enclose(t, &lookup).is_none_or(|i| i.outside(&self.eps)));
        eq_out || self.ineqs.iter().any(|t| enclose(t, &lookup).is_none_or(|i| i.non_positive()))
    }

    fn qualifies(&self, point: &[Rational]) -> bool {
        let mut env = self.env.clone();
        env.extend(self.vars.iter().cloned().zip(point.iter().cloned()));
        certify_conjunct(self.eqs, self.ineqs, &env, self.budget).is_some()
    }

    fn search(&self, b: &RatBox) -> Outcome {
        let root: Vec<Side> = b
            .sides()
            .iter()
            .map(|(lo, hi)| Side { lo: lo.clone(), lo_open: false, hi: hi.clone(), hi_open: false })
            .collect();
        let mut stack = vec![(root, false)];
        let mut nodes = 0usize;
        'regions: while let Some((region, tested)) = stack.pop() {
            nodes += 1;
            if nodes > NODE_CAP {
                return Outcome::Capped;
            }
            let mut point = Vec::with_capacity(region.len());
            for side in &region {
                match side.simplest() {
                    Some(s) if denom_nat(&s) <= self.max_den => point.push(s),
                    _ => continue 'regions,
                }
            }
            if self.excluded(&region) {
                continue;
            }
            if !tested && self.qualifies(&point) {
                return Outcome::Found(point);
            }
            let mut widest: Option<(usize, Rational)> = None;
            for (j, side) in region.iter().enumerate() {
                let w = &side.hi - &side.lo;
                if !w.is_zero() && widest.as_ref().is_none_or(|(_, best)| &w > best) {
                    widest = Some((j, w));
                }
            }
            let Some((j, _)) = widest else { continue };
            let s = point[j].clone();
            let mut low = region.clone();
            low[j].hi = s.clone();
            low[j].hi_open = true;
            let mut mid = region.clone();
            mid[j] = Side { lo: s.clone(), lo_open: false, hi: s.clone(), hi_open: false };
            let mut high = region;
            high[j].lo = s;
            high[j].lo_open = true;
            stack.push((high, false));
            stack.push((mid, true));
            stack.push((low, false));
        }
        Outcome::Empty
    }
}
