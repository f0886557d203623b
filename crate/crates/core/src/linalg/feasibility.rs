use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::LinalgError;

pub type Rational = BigRational;

/// Which side of the right-hand side the row sits on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// `row · x  (< | <=)  rhs`
    Upper,
    /// `row · x  (> | >=)  rhs`
    Lower,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Inequality {
    pub row: Vec<Rational>,
    pub rhs: Rational,
    pub strict: bool,
    pub direction: Direction,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Equality {
    pub row: Vec<Rational>,
    pub rhs: Rational,
}

/// Conjunction of linear equalities and (strict or weak) inequalities over `Q^vars`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LinearSystem {
    vars: usize,
    equalities: Vec<Equality>,
    inequalities: Vec<Inequality>,
}

impl LinearSystem {
    pub fn new(vars: usize) -> Self {
        LinearSystem { vars, ..Default::default() }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn equalities(&self) -> &[Equality] {
        &self.equalities
    }

    pub fn inequalities(&self) -> &[Inequality] {
        &self.inequalities
    }

    fn check_len(&self, row: &[Rational]) -> Result<(), LinalgError> {
        if row.len() != self.vars {
            return Err(LinalgError::Dimension { left: self.vars, right: row.len() });
        }
        Ok(())
    }

    pub fn equal(&mut self, row: Vec<Rational>, rhs: Rational) -> Result<&mut Self, LinalgError> {
        self.check_len(&row)?;
        self.equalities.push(Equality { row, rhs });
        Ok(self)
    }

    pub fn constrain(
        &mut self,
        row: Vec<Rational>,
        direction: Direction,
        strict: bool,
        rhs: Rational,
    ) -> Result<&mut Self, LinalgError> {
        self.check_len(&row)?;
        self.inequalities.push(Inequality { row, rhs, strict, direction });
        Ok(self)
    }

    pub fn less(&mut self, row: Vec<Rational>, rhs: Rational) -> Result<&mut Self, LinalgError> {
        self.constrain(row, Direction::Upper, true, rhs)
    }

    pub fn less_eq(&mut self, row: Vec<Rational>, rhs: Rational) -> Result<&mut Self, LinalgError> {
        self.constrain(row, Direction::Upper, false, rhs)
    }

    pub fn greater(&mut self, row: Vec<Rational>, rhs: Rational) -> Result<&mut Self, LinalgError> {
        self.constrain(row, Direction::Lower, true, rhs)
    }

    pub fn greater_eq(
        &mut self,
        row: Vec<Rational>,
        rhs: Rational,
    ) -> Result<&mut Self, LinalgError> {
        self.constrain(row, Direction::Lower, false, rhs)
    }

    /// Checks a candidate point exactly against every constraint.
    pub fn satisfied_by(&self, x: &[Rational]) -> bool {
        if x.len() != self.vars {
            return false;
        }
        let eqs = self.equalities.iter().all(|e| dot(&e.row, x) == e.rhs);
        let ineqs = self.inequalities.iter().all(|c| {
            let lhs = dot(&c.row, x);
            match (c.direction, c.strict) {
                (Direction::Upper, true) => lhs < c.rhs,
                (Direction::Upper, false) => lhs <= c.rhs,
                (Direction::Lower, true) => lhs > c.rhs,
                (Direction::Lower, false) => lhs >= c.rhs,
            }
        });
        eqs && ineqs
    }

    pub fn is_feasible(&self) -> bool {
        self.feasible().is_some()
    }

    /// Decides feasibility by Fourier–Motzkin elimination; returns a witness when feasible.
    pub fn feasible(&self) -> Option<Vec<Rational>> {
        let mut subst: Vec<(usize, Vec<Rational>, Rational)> = Vec::new();
        let mut rows: Vec<Upper> = self.inequalities.iter().map(Upper::from).collect();
        let mut eqs: Vec<(Vec<Rational>, Rational)> =
            self.equalities.iter().map(|e| (e.row.clone(), e.rhs.clone())).collect();

        // Gaussian elimination on the equalities.
        while let Some((row, rhs)) = eqs.pop() {
            let Some(p) = row.iter().position(|a| !a.is_zero()) else {
                if rhs.is_zero() {
                    continue;
                }
                return None;
            };
            // x_p = (rhs - sum_{j != p} row_j x_j) / row_p
            let piv = row[p].clone();
            let expr: Vec<Rational> = row
                .iter()
                .enumerate()
                .map(|(j, a)| if j == p { Rational::zero() } else { -a / &piv })
                .collect();
            let constant = &rhs / &piv;
            for (r, b) in eqs.iter_mut() {
                substitute(r, b, p, &expr, &constant);
            }
            for u in rows.iter_mut() {
                substitute(&mut u.row, &mut u.rhs, p, &expr, &constant);
            }
            subst.push((p, expr, constant));
        }

        let mut remaining: Vec<usize> = (0..self.vars)
            .filter(|v| !subst.iter().any(|(p, _, _)| p == v))
            .collect();
        let mut active = normalize(rows)?;
        let mut stages: Vec<(usize, Vec<Upper>)> = Vec::new();

        while !remaining.is_empty() {
            // Eliminate the variable with the fewest generated combinations.
            let (pos_in_remaining, var) = remaining
                .iter()
                .copied()
                .enumerate()
                .min_by_key(|&(_, v)| {
                    let pos = active.iter().filter(|u| u.row[v].is_positive()).count();
                    let neg = active.iter().filter(|u| u.row[v].is_negative()).count();
                    pos * neg
                })
                .expect("non-empty");
            remaining.swap_remove(pos_in_remaining);

            let (touching, rest): (Vec<Upper>, Vec<Upper>) =
                active.into_iter().partition(|u| !u.row[var].is_zero());
            let mut next = rest;
            for p in touching.iter().filter(|u| u.row[var].is_positive()) {
                for n in touching.iter().filter(|u| u.row[var].is_negative()) {
                    next.push(combine(p, n, var));
                }
            }
            stages.push((var, touching));
            active = normalize(next)?;
        }

        // All variables eliminated; `normalize` already rejected violated constants.
        let mut x = vec![Rational::zero(); self.vars];
        for (var, cons) in stages.iter().rev() {
            x[*var] = pick_value(cons, *var, &x);
        }
        for (p, expr, constant) in subst.iter().rev() {
            x[*p] = constant + dot(expr, &x);
        }
        debug_assert!(self.satisfied_by(&x));
        Some(x)
    }
}

/// `row · x  (< | <=)  rhs`
#[derive(Clone, Debug)]
struct Upper {
    row: Vec<Rational>,
    rhs: Rational,
    strict: bool,
}

impl From<&Inequality> for Upper {
    fn from(c: &Inequality) -> Self {
        match c.direction {
            Direction::Upper => Upper { row: c.row.clone(), rhs: c.rhs.clone(), strict: c.strict },
            Direction::Lower => Upper {
                row: c.row.iter().map(|a| -a).collect(),
                rhs: -&c.rhs,
                strict: c.strict,
            },
        }
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

fn substitute(row: &mut [Rational], rhs: &mut Rational, p: usize, expr: &[Rational], c: &Rational) {
    let a = std::mem::replace(&mut row[p], Rational::zero());
    if a.is_zero() {
        return;
    }
    for (r, e) in row.iter_mut().zip(expr) {
        *r += &a * e;
    }
    *rhs -= &a * c;
}

fn combine(p: &Upper, n: &Upper, var: usize) -> Upper {
    // p.row[var] > 0 > n.row[var]; scale to cancel var.
    let fp = -&n.row[var];
    let fn_ = p.row[var].clone();
    let row = p.row.iter().zip(&n.row).map(|(a, b)| a * &fp + b * &fn_).collect();
    Upper { row, rhs: &p.rhs * &fp + &n.rhs * &fn_, strict: p.strict || n.strict }
}

/// Scales rows so the first nonzero coefficient has magnitude one, drops trivial rows,
/// and keeps only the tightest bound per direction. Returns `None` on a violated constant row.
fn normalize(rows: Vec<Upper>) -> Option<Vec<Upper>> {
    let mut best: BTreeMap<Vec<Rational>, (Rational, bool)> = BTreeMap::new();
    for u in rows {
        let Some(lead) = u.row.iter().find(|a| !a.is_zero()).map(Signed::abs) else {
            let ok = if u.strict { u.rhs.is_positive() } else { !u.rhs.is_negative() };
            if !ok {
                return None;
            }
            continue;
        };
        let row: Vec<Rational> = u.row.iter().map(|a| a / &lead).collect();
        let rhs = &u.rhs / &lead;
        match best.get_mut(&row) {
            Some(slot) => {
                if rhs < slot.0 {
                    *slot = (rhs, u.strict);
                } else if rhs == slot.0 {
                    slot.1 |= u.strict;
                }
            }
            None => {
                best.insert(row, (rhs, u.strict));
            }
        }
    }
    Some(best.into_iter().map(|(row, (rhs, strict))| Upper { row, rhs, strict }).collect())
}

/// Chooses a value for `var` given the already-fixed later variables: the midpoint of the
/// feasible interval, the single point of a closed degenerate interval, or a unit step past a
/// one-sided bound.
fn pick_value(cons: &[Upper], var: usize, x: &[Rational]) -> Rational {
    let mut lower: Option<Rational> = None;
    let mut upper: Option<Rational> = None;
    for u in cons {
        let a = &u.row[var];
        let rest: Rational = u
            .row
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != var)
            .fold(Rational::zero(), |acc, (j, c)| acc + c * &x[j]);
        let bound = (&u.rhs - rest) / a;
        if a.is_positive() {
            if upper.as_ref().is_none_or(|b| bound < *b) {
                upper = Some(bound);
            }
        } else if lower.as_ref().is_none_or(|b| bound > *b) {
            lower = Some(bound);
        }
    }
    let two = Rational::from_integer(BigInt::from(2));
    match (lower, upper) {
        (Some(l), Some(h)) => (l + h) / two,
        (Some(l), None) => l + Rational::one(),
        (None, Some(h)) => h - Rational::one(),
        (None, None) => Rational::zero(),
    }
}

/// Parses `"p"` or `"p/q"` into an exact rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}
