//! Brute-force cross-checks: chamber sampling, Hom sets on lattice boxes, grid feasibility.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cone::{Cone, Divisor, RationalVector};
use crate::error::{Error, Result};
use crate::linalg::{Direction, IntMatrix, LinearSystem, Rational};

/// Most variables `grid_feasible` accepts.
pub const GRID_MAX_VARS: usize = 4;
/// Most sample points `enumerate_chambers` visits.
pub const MAX_SAMPLES: u64 = 20_000_000;

/// Sample points `a / D + offset` per coordinate; `radius` bounds boxes where one is needed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridSpec {
    pub denominator: u64,
    pub offset: Rational,
    pub radius: u32,
}

impl GridSpec {
    pub fn new(denominator: u64, offset: Rational, radius: u32) -> Result<Self> {
        if denominator < 2 {
            return Err(Error::InvalidGrid("denominator must be at least 2".into()));
        }
        if !(offset > Rational::zero() && offset < Rational::one()) {
            return Err(Error::InvalidGrid("offset must lie in (0, 1)".into()));
        }
        if radius == 0 {
            return Err(Error::InvalidGrid("box radius must be positive".into()));
        }
        Ok(GridSpec { denominator, offset, radius })
    }

    /// Denominator `D` with offset `1 / (2D)`.
    pub fn with_denominator(denominator: u64, radius: u32) -> Result<Self> {
        let off = Rational::new(BigInt::one(), BigInt::from(2 * denominator.max(1)));
        Self::new(denominator, off, radius)
    }

    /// Denominator `D` with offset `1 / (2 D U)`, `U` the largest 1-norm of a ray: the shift moves
    /// every `<x, u>` by less than `1 / (2D)`.
    pub fn for_cone(cone: &Cone, denominator: u64, radius: u32) -> Result<Self> {
        let u = cone.rays().iter().map(|r| r.iter().map(|x| x.unsigned_abs()).sum::<u64>()).max().unwrap_or(1);
        let off = Rational::new(BigInt::one(), BigInt::from(2 * denominator.max(1)) * BigInt::from(u.max(1)));
        Self::new(denominator, off, radius)
    }

    /// `D = (n + 1) L` with `L` the lcm of the nonzero maximal minors of the ray matrix.
    ///
    /// Vertices of the arrangement `<x, u> in Z` lie in `(1/L) Z^n`, so every open cell contains
    /// the centroid of `n + 1` of its vertices, a point of `(1/D) Z^n` at distance at least `1/D`
    /// from every wall in each `<., u>`; the offset stays inside that margin.
    pub fn default_for(cone: &Cone) -> Result<Self> {
        let n = cone.dim() as u64;
        let d = (n + 1).checked_mul(minor_lcm(cone.ray_matrix())?).ok_or(Error::Overflow)?;
        Self::for_cone(cone, d.max(2), 2)
    }
}

/// Lcm of the absolute values of the nonzero `n x n` minors of a `k x n` matrix.
pub fn minor_lcm(a: &IntMatrix) -> Result<u64> {
    let n = a.cols();
    let mut l = BigInt::one();
    for rows in (0..a.rows()).combinations(n) {
        let det = a.select_rows(&rows).determinant()?;
        if !det.is_zero() {
            l = l.lcm(&det.abs());
        }
    }
    l.to_u64().ok_or(Error::Overflow)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChamberCensus {
    pub denominator: u64,
    pub samples: u64,
    pub distinct_tuples: usize,
    pub classes: usize,
    /// One ceiling tuple per linear-equivalence class, in order of discovery over sorted tuples.
    pub representatives: Vec<Vec<i64>>,
}

/// Samples `v` over the offset grid in `[0, 1)^n` and counts ceiling tuples up to linear equivalence.
pub fn enumerate_chambers(cone: &Cone, grid: &GridSpec) -> Result<ChamberCensus> {
    let n = cone.dim();
    let d = grid.denominator;
    let samples = (d as u128).checked_pow(n as u32).filter(|&s| s <= MAX_SAMPLES as u128).ok_or_else(|| {
        Error::InvalidGrid(format!("{d}^{n} samples exceed the limit of {MAX_SAMPLES}"))
    })? as u64;

    // v_i = (a_i q + p D) / (D q) with offset p / q
    let q = grid.offset.denom().to_i128().ok_or(Error::Overflow)?;
    let p = grid.offset.numer().to_i128().ok_or(Error::Overflow)?;
    let scale = (d as i128).checked_mul(q).ok_or(Error::Overflow)?;
    let t = p.checked_mul(d as i128).ok_or(Error::Overflow)?;
    let umax = cone.rays().iter().flatten().map(|x| x.unsigned_abs() as i128).max().unwrap_or(0);
    // |<num, u>| <= n * umax * (d q + t) must fit comfortably
    (n as i128)
        .checked_mul(umax)
        .and_then(|x| x.checked_mul(scale.checked_add(t)?))
        .filter(|&x| x < i128::MAX / 4)
        .ok_or(Error::Overflow)?;
    let rays = cone.rays();

    let tuples: BTreeSet<Vec<i64>> = (0..samples)
        .into_par_iter()
        .map(|idx| {
            let mut rest = idx;
            let num: Vec<i128> = (0..n)
                .map(|_| {
                    let a = rest % d;
                    rest /= d;
                    a as i128 * q + t
                })
                .collect();
            rays.iter()
                .map(|u| {
                    let dot: i128 = u.iter().zip(&num).map(|(&x, y)| x as i128 * y).sum();
                    Integer::div_ceil(&dot, &scale) as i64
                })
                .collect::<Vec<i64>>()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect();

    let mut reps: Vec<Vec<i64>> = Vec::new();
    for tuple in &tuples {
        let dt = Divisor::from_i64(tuple);
        let mut known = false;
        for r in &reps {
            if cone.lin_equiv(&dt, &Divisor::from_i64(r))? {
                known = true;
                break;
            }
        }
        if !known {
            reps.push(tuple.clone());
        }
    }
    Ok(ChamberCensus { denominator: d, samples, distinct_tuples: tuples.len(), classes: reps.len(), representatives: reps })
}

/// Compares `Hom(A_v, A_w)` against the polytope `Q_{d(v) - d(w)}` on `|m_i| <= R`.
pub fn hom_box_check(cone: &Cone, v: &RationalVector, w: &RationalVector, radius: u32) -> Result<bool> {
    hom_box_check_shifted(cone, v, w, radius, &vec![0; cone.num_rays()])
}

/// As [`hom_box_check`], with `shift` added to the right-hand sides of `Q`; nonzero shifts
/// model a corrupted ceiling and should be refuted.
pub fn hom_box_check_shifted(
    cone: &Cone,
    v: &RationalVector,
    w: &RationalVector,
    radius: u32,
    shift: &[i64],
) -> Result<bool> {
    let n = cone.dim();
    if shift.len() != cone.num_rays() {
        return Err(crate::linalg::LinalgError::Dimension { left: cone.num_rays(), right: shift.len() }.into());
    }
    let dv = cone.ceil_divisor(v)?;
    let dw = cone.ceil_divisor(w)?;
    let rays = cone.rays();
    let pair = |u: &[i64], x: &RationalVector| -> Rational {
        u.iter().zip(&x.0).fold(Rational::zero(), |acc, (&a, y)| acc + y * BigInt::from(a))
    };
    let wv: Vec<Rational> = rays.iter().map(|u| pair(u, w)).collect();
    let vv: Vec<Rational> = rays.iter().map(|u| pair(u, v)).collect();

    // (b) separates per ray: m works for every m' iff <m,u> + min <m',u> >= <w,u>
    let r = radius as i64;
    let inner: Vec<Vec<i64>> = lattice_box(n, 2 * r)
        .into_iter()
        .filter(|m| rays.iter().zip(&vv).all(|(u, t)| Rational::from_integer(dot(u, m).into()) >= *t))
        .collect();
    let min_inner: Vec<Option<i64>> =
        rays.iter().map(|u| inner.iter().map(|m| dot(u, m)).min()).collect();

    for m in lattice_box(n, r) {
        let in_q = rays.iter().enumerate().all(|(i, u)| {
            BigInt::from(dot(u, &m)) >= &dw.0[i] - &dv.0[i] + BigInt::from(shift[i])
        });
        let in_hom = rays.iter().enumerate().all(|(i, u)| match min_inner[i] {
            Some(mu) => Rational::from_integer(BigInt::from(dot(u, &m) + mu)) >= wv[i],
            None => true,
        });
        if in_q != in_hom {
            return Ok(false);
        }
    }
    Ok(true)
}

fn dot(u: &[i64], m: &[i64]) -> i64 {
    u.iter().zip(m).map(|(a, b)| a * b).sum()
}

fn lattice_box(n: usize, r: i64) -> Vec<Vec<i64>> {
    (0..n).map(|_| -r..=r).multi_cartesian_product().collect()
}

/// Whether some point with coordinates in `(1/D) Z`, `|x_i| <= R`, satisfies `sys`.
/// A `true` answer is a witness; `false` says nothing about off-grid solutions.
pub fn grid_feasible(sys: &LinearSystem, grid: &GridSpec) -> Result<bool> {
    let v = sys.vars();
    if v > GRID_MAX_VARS {
        return Err(Error::GridTooLarge { max: GRID_MAX_VARS, found: v });
    }
    let d = BigInt::from(grid.denominator);
    let bound = BigInt::from(grid.denominator) * BigInt::from(grid.radius);

    // every constraint becomes  sum c_i a_i  (rel)  t  with integers, x_i = a_i / D
    let mut cons: Vec<Scaled> = Vec::new();
    for e in sys.equalities() {
        cons.push(Scaled::new(&e.row, &e.rhs, &d, Rel::Eq));
    }
    for c in sys.inequalities() {
        let rel = match (c.direction, c.strict) {
            (Direction::Upper, true) => Rel::Lt,
            (Direction::Upper, false) => Rel::Le,
            (Direction::Lower, true) => Rel::Gt,
            (Direction::Lower, false) => Rel::Ge,
        };
        cons.push(Scaled::new(&c.row, &c.rhs, &d, rel));
    }
    // constraints close at their last nonzero coefficient
    let mut closing: Vec<Vec<&Scaled>> = vec![Vec::new(); v];
    for c in &cons {
        match c.coef.iter().rposition(|x| !x.is_zero()) {
            Some(i) => closing[i].push(c),
            None => {
                if !c.rel.holds(&BigInt::zero(), &c.rhs) {
                    return Ok(false);
                }
            }
        }
    }
    if v == 0 {
        return Ok(true);
    }
    let mut assigned = Vec::with_capacity(v);
    Ok(search_grid(&closing, &bound, &mut assigned))
}

#[derive(Clone, Copy, Debug)]
enum Rel {
    Eq,
    Lt,
    Le,
    Gt,
    Ge,
}

impl Rel {
    fn holds(self, lhs: &BigInt, rhs: &BigInt) -> bool {
        match self {
            Rel::Eq => lhs == rhs,
            Rel::Lt => lhs < rhs,
            Rel::Le => lhs <= rhs,
            Rel::Gt => lhs > rhs,
            Rel::Ge => lhs >= rhs,
        }
    }
}

#[derive(Clone, Debug)]
struct Scaled {
    coef: Vec<BigInt>,
    rhs: BigInt,
    rel: Rel,
}

impl Scaled {
    fn new(row: &[Rational], rhs: &Rational, d: &BigInt, rel: Rel) -> Self {
        let l = row.iter().chain(std::iter::once(rhs)).fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let coef = row.iter().map(|x| (x * &l).to_integer()).collect();
        let rhs = (rhs * &l).to_integer() * d;
        Scaled { coef, rhs, rel }
    }
}

fn search_grid(closing: &[Vec<&Scaled>], bound: &BigInt, assigned: &mut Vec<BigInt>) -> bool {
    let i = assigned.len();
    let mut lo = -bound.clone();
    let mut hi = bound.clone();
    for c in &closing[i] {
        let partial: BigInt = c.coef.iter().zip(assigned.iter()).map(|(x, a)| x * a).sum();
        let t = &c.rhs - partial;
        let k = &c.coef[i];
        let (l, h) = bounds(k, &t, c.rel);
        if let Some(l) = l {
            lo = lo.max(l);
        }
        if let Some(h) = h {
            hi = hi.min(h);
        }
        if lo > hi {
            return false;
        }
    }
    if i + 1 == closing.len() {
        return lo <= hi;
    }
    let mut a = lo;
    while a <= hi {
        assigned.push(a.clone());
        let ok = search_grid(closing, bound, assigned);
        assigned.pop();
        if ok {
            return true;
        }
        a += 1;
    }
    false
}

/// Integer range of `a` with `k a (rel) t`, `k != 0`.
fn bounds(k: &BigInt, t: &BigInt, rel: Rel) -> (Option<BigInt>, Option<BigInt>) {
    let floor = t.div_floor(k);
    let ceil = t.div_ceil(k);
    let pos = k.is_positive();
    match (rel, pos) {
        (Rel::Eq, _) => {
            if (t % k).is_zero() {
                (Some(floor.clone()), Some(floor))
            } else {
                (Some(BigInt::one()), Some(BigInt::zero()))
            }
        }
        (Rel::Le, true) | (Rel::Ge, false) => (None, Some(floor)),
        (Rel::Lt, true) | (Rel::Gt, false) => (None, Some(ceil - 1)),
        (Rel::Ge, true) | (Rel::Le, false) => (Some(ceil), None),
        (Rel::Gt, true) | (Rel::Lt, false) => (Some(floor + 1), None),
    }
}
