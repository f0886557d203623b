//! Class group of the cone: free quotient map, beta vectors, torsion, and lattice points.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cone::{Cone, Divisor};
use crate::error::{Error, Result};
use crate::linalg::{hermite_normal_form, smith_normal_form, IntMatrix, IntegerSolver};

/// Integer point in the free part of the class group.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticePoint(pub Vec<i64>);

impl LatticePoint {
    pub fn origin(dim: usize) -> Self {
        LatticePoint(vec![0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_origin(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn checked_add(&self, other: &LatticePoint) -> Result<LatticePoint> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::Overflow))
            .collect::<Result<_>>()
            .map(LatticePoint)
    }

    pub fn checked_sub(&self, other: &LatticePoint) -> Result<LatticePoint> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b).ok_or(Error::Overflow))
            .collect::<Result<_>>()
            .map(LatticePoint)
    }

    pub fn neg(&self) -> LatticePoint {
        LatticePoint(self.0.iter().map(|x| -x).collect())
    }

    pub fn to_big(&self) -> Vec<BigInt> {
        self.0.iter().map(|&x| BigInt::from(x)).collect()
    }

    pub fn from_big(v: &[BigInt]) -> Result<Self> {
        v.iter().map(|x| x.to_i64().ok_or(Error::Overflow)).collect::<Result<_>>().map(LatticePoint)
    }

    /// Parses comma-separated integers such as `1,-1`.
    pub fn parse(s: &str) -> Option<Self> {
        if s.trim().is_empty() {
            return Some(LatticePoint(Vec::new()));
        }
        s.split(',').map(|t| t.trim().parse().ok()).collect::<Option<Vec<i64>>>().map(LatticePoint)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Element of the torsion subgroup, one residue per invariant factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TorsionElement(pub Vec<i64>);

impl TorsionElement {
    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }
}

#[derive(Clone, Debug)]
pub struct ClassGroupData {
    free_rank: usize,
    torsion: Vec<i64>,
    c: IntMatrix,
    betas: Vec<LatticePoint>,
    torsion_map: IntMatrix,
    section: IntMatrix,
}

impl ClassGroupData {
    /// Smith decomposition `U A V = D` of the ray matrix `A`: the last `k - n` rows of `U`
    /// give the free quotient (brought to Hermite form), rows with `d_i > 1` give torsion.
    pub fn compute(cone: &Cone) -> Result<Self> {
        let a = cone.ray_matrix();
        let (k, n) = (a.rows(), a.cols());
        let smith = smith_normal_form(a);
        let diag = smith.diagonal();
        let mut torsion = Vec::new();
        let mut torsion_rows = Vec::new();
        for (i, d) in diag.iter().enumerate() {
            if d > &BigInt::one() {
                torsion.push(d.to_i64().ok_or(Error::Overflow)?);
                torsion_rows.push(i);
            }
        }
        let free: Vec<usize> = (n..k).collect();
        let (_, c) = hermite_normal_form(&smith.u.select_rows(&free));
        let torsion_map = smith.u.select_rows(&torsion_rows);
        let data = Self::assemble(c, torsion, torsion_map)?;
        match &cone.spec().class_basis {
            Some(rows) => data.in_basis(&IntMatrix::from_rows(rows, k)?, a),
            None => Ok(data),
        }
    }

    fn assemble(c: IntMatrix, torsion: Vec<i64>, torsion_map: IntMatrix) -> Result<Self> {
        let (r, k) = (c.rows(), c.cols());
        let betas = (0..k).map(|j| LatticePoint::from_big(&c.column(j))).collect::<Result<_>>()?;
        let solver = IntegerSolver::new(&c);
        let mut section = IntMatrix::zeros(k, r);
        for i in 0..r {
            let mut e = vec![BigInt::zero(); r];
            e[i] = BigInt::one();
            let s = solver.solve(&e)?.ok_or(Error::BasisMismatch)?;
            for (row, v) in s.into_iter().enumerate() {
                section[(row, i)] = v;
            }
        }
        Ok(ClassGroupData { free_rank: r, torsion, c, betas, torsion_map, section })
    }

    /// Re-expresses the free quotient in the basis given by `target`, which must equal `T * C`
    /// for a unimodular `T`.
    pub fn in_basis(&self, target: &IntMatrix, rays: &IntMatrix) -> Result<Self> {
        if target.rows() != self.free_rank || target.cols() != self.c.cols() {
            return Err(Error::BasisMismatch);
        }
        if !target.mul(rays)?.is_zero() {
            return Err(Error::BasisMismatch);
        }
        let t = target.mul(&self.section)?;
        if t.mul(&self.c)? != *target || t.determinant()?.abs() != BigInt::one() {
            return Err(Error::BasisMismatch);
        }
        Self::assemble(target.clone(), self.torsion.clone(), self.torsion_map.clone())
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    /// Invariant factors greater than one.
    pub fn torsion(&self) -> &[i64] {
        &self.torsion
    }

    pub fn torsion_order(&self) -> i64 {
        self.torsion.iter().product()
    }

    /// Free quotient map `C`, shape `(k - n) x k`.
    pub fn c(&self) -> &IntMatrix {
        &self.c
    }

    pub fn betas(&self) -> &[LatticePoint] {
        &self.betas
    }

    /// `C (-d)`.
    pub fn point_of(&self, d: &Divisor) -> Result<LatticePoint> {
        let img = self.c.mul_vec(&(-d).0)?;
        LatticePoint::from_big(&img)
    }

    pub fn torsion_of(&self, d: &Divisor) -> Result<TorsionElement> {
        let img = self.torsion_map.mul_vec(&d.0)?;
        img.iter()
            .zip(&self.torsion)
            .map(|(x, &m)| x.mod_floor(&BigInt::from(m)).to_i64().ok_or(Error::Overflow))
            .collect::<Result<_>>()
            .map(TorsionElement)
    }

    /// Torsion part of `[d1 - d2]` when both divisors land on the same lattice point.
    pub fn torsion_class(&self, d1: &Divisor, d2: &Divisor) -> Result<Option<TorsionElement>> {
        if self.point_of(d1)? != self.point_of(d2)? {
            return Ok(None);
        }
        self.torsion_of(&(d1 - d2)).map(Some)
    }

    /// Deterministic divisor `d` with `C (-d) = p`.
    pub fn divisor_for_point(&self, p: &LatticePoint) -> Result<Divisor> {
        if p.dim() != self.free_rank {
            return Err(Error::PointDimension {
                point: p.clone(),
                expected: self.free_rank,
                found: p.dim(),
            });
        }
        let s = self.section.mul_vec(&p.to_big())?;
        Ok(Divisor(s.into_iter().map(|x| -x).collect()))
    }

    /// Sum of the betas over a subset of rays.
    pub fn beta_sum(&self, subset: impl IntoIterator<Item = usize>) -> Result<LatticePoint> {
        let mut acc = LatticePoint::origin(self.free_rank);
        for r in subset {
            acc = acc.checked_add(&self.betas[r])?;
        }
        Ok(acc)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassGroupSummary {
    pub free_rank: usize,
    pub torsion: Vec<i64>,
    pub betas: Vec<Vec<i64>>,
}

impl From<&ClassGroupData> for ClassGroupSummary {
    fn from(cg: &ClassGroupData) -> Self {
        ClassGroupSummary {
            free_rank: cg.free_rank,
            torsion: cg.torsion.clone(),
            betas: cg.betas.iter().map(|b| b.0.clone()).collect(),
        }
    }
}
