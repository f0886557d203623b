//! Half-open zonotope spanned by the beta vectors.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::class_group::LatticePoint;
use crate::error::{Error, Result};
use crate::linalg::{LinearSystem, Rational};

/// Image of `(-1, 0]^k` under `alpha -> sum alpha_i beta_i`.
#[derive(Clone, Debug)]
pub struct Zonotope {
    betas: Vec<LatticePoint>,
    dim: usize,
    points: Vec<LatticePoint>,
}

impl Zonotope {
    pub fn new(betas: Vec<LatticePoint>, dim: usize) -> Result<Self> {
        if let Some(b) = betas.iter().find(|b| b.dim() != dim) {
            return Err(Error::PointDimension { point: b.clone(), expected: dim, found: b.dim() });
        }
        let mut z = Zonotope { betas, dim, points: Vec::new() };
        let boxes = z.bounding_box();
        let candidates = box_points(&boxes);
        let mut points: Vec<LatticePoint> = candidates
            .into_par_iter()
            .filter(|p| z.contains_lattice(p))
            .collect();
        points.sort();
        z.points = points;
        Ok(z)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn betas(&self) -> &[LatticePoint] {
        &self.betas
    }

    /// Per coordinate: `[sum min(-beta, 0), sum max(-beta, 0)]`, the range of the closure.
    pub fn bounding_box(&self) -> Vec<(i64, i64)> {
        (0..self.dim)
            .map(|i| {
                self.betas.iter().fold((0, 0), |(lo, hi), b| {
                    let x = -b.0[i];
                    (lo + x.min(0), hi + x.max(0))
                })
            })
            .collect()
    }

    /// Exact membership of a rational point.
    pub fn contains(&self, p: &[Rational]) -> bool {
        if p.len() != self.dim {
            return false;
        }
        let k = self.betas.len();
        let mut sys = LinearSystem::new(k);
        for (i, target) in p.iter().enumerate() {
            let row = self.betas.iter().map(|b| Rational::from_integer(BigInt::from(b.0[i]))).collect();
            sys.equal(row, target.clone()).expect("row length");
        }
        for j in 0..k {
            let mut row = vec![Rational::zero(); k];
            row[j] = Rational::one();
            sys.greater(row.clone(), -Rational::one()).expect("row length");
            sys.less_eq(row, Rational::zero()).expect("row length");
        }
        sys.is_feasible()
    }

    pub fn contains_lattice(&self, p: &LatticePoint) -> bool {
        let q: Vec<Rational> = p.0.iter().map(|&x| Rational::from_integer(BigInt::from(x))).collect();
        self.contains(&q)
    }

    /// Sorted lattice points.
    pub fn lattice_points(&self) -> &[LatticePoint] {
        &self.points
    }

    pub fn is_lattice_point(&self, p: &LatticePoint) -> bool {
        self.points.binary_search(p).is_ok()
    }
}

fn box_points(bounds: &[(i64, i64)]) -> Vec<LatticePoint> {
    let mut out = vec![Vec::new()];
    for &(lo, hi) in bounds {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<i64>| {
                (lo..=hi).map(move |x| {
                    let mut p = prefix.clone();
                    p.push(x);
                    p
                })
            })
            .collect();
    }
    out.into_iter().map(LatticePoint).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticePointsReport {
    pub lattice_points: Vec<Vec<i64>>,
}

impl From<&Zonotope> for LatticePointsReport {
    fn from(z: &Zonotope) -> Self {
        LatticePointsReport { lattice_points: z.points.iter().map(|p| p.0.clone()).collect() }
    }
}
