//! Cone inputs, validation, Gorenstein elements and ceiling divisors.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{parse_rational, IntMatrix, IntegerSolver, LinearSystem, Rational};

/// Ray count above which subset enumeration is refused.
pub const MAX_RAYS: usize = 24;

/// Raw cone input: primitive ray generators as rows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub rays: Vec<Vec<i64>>,
    /// Optional preferred rows for the free quotient map; must present the same quotient.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class_basis: Option<Vec<Vec<i64>>>,
}

impl ConeSpec {
    pub fn new(rays: Vec<Vec<i64>>) -> Self {
        ConeSpec { name: None, rays, class_basis: None }
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn with_class_basis(mut self, rows: Vec<Vec<i64>>) -> Self {
        self.class_basis = Some(rows);
        self
    }

    pub fn validate(&self) -> Result<Cone> {
        Cone::new(self.clone())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    Simplicial,
    AlmostSimplicial,
    General,
}

/// Integer coefficients over the rays.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Divisor(pub Vec<BigInt>);

impl Divisor {
    pub fn zero(k: usize) -> Self {
        Divisor(vec![BigInt::zero(); k])
    }

    pub fn unit(k: usize, ray: usize) -> Self {
        let mut d = Self::zero(k);
        d.0[ray] = BigInt::one();
        d
    }

    pub fn from_i64(v: &[i64]) -> Self {
        Divisor(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.0
    }
}

impl Add for &Divisor {
    type Output = Divisor;
    fn add(self, rhs: &Divisor) -> Divisor {
        Divisor(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Divisor {
    type Output = Divisor;
    fn sub(self, rhs: &Divisor) -> Divisor {
        Divisor(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Divisor {
    type Output = Divisor;
    fn neg(self) -> Divisor {
        Divisor(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Point of `M ⊗ Q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalVector(pub Vec<Rational>);

impl RationalVector {
    pub fn zero(n: usize) -> Self {
        RationalVector(vec![Rational::zero(); n])
    }

    /// Parses comma-separated entries such as `0,-1/4,0`.
    pub fn parse(s: &str) -> Option<Self> {
        s.split(',').map(parse_rational).collect::<Option<Vec<_>>>().map(RationalVector)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// A validated pointed full-dimensional cone with primitive rays.
#[derive(Clone, Debug)]
pub struct Cone {
    spec: ConeSpec,
    dim: usize,
    matrix: IntMatrix,
    solver: IntegerSolver,
}

impl Cone {
    pub fn new(spec: ConeSpec) -> Result<Self> {
        let Some(first) = spec.rays.first() else {
            return Err(Error::NoRays);
        };
        let dim = first.len();
        for (index, ray) in spec.rays.iter().enumerate() {
            if ray.len() != dim {
                return Err(Error::RaggedRay { index, expected: dim, found: ray.len() });
            }
            let g = ray.iter().fold(0i64, |acc, &x| acc.gcd(&x));
            if g != 1 {
                return Err(Error::NonPrimitiveRay { index });
            }
        }
        if spec.rays.len() > MAX_RAYS {
            return Err(Error::TooManyRays { rays: spec.rays.len(), max: MAX_RAYS });
        }
        let matrix = IntMatrix::from_rows(&spec.rays, dim)?;
        let rank = matrix.rank();
        if rank != dim {
            return Err(Error::NotFullDimensional { rank, dim });
        }
        if !pointed(&matrix)? {
            return Err(Error::NotPointed);
        }
        let solver = IntegerSolver::new(&matrix);
        Ok(Cone { spec, dim, matrix, solver })
    }

    pub fn spec(&self) -> &ConeSpec {
        &self.spec
    }

    pub fn name(&self) -> Option<&str> {
        self.spec.name.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_rays(&self) -> usize {
        self.matrix.rows()
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.spec.rays
    }

    /// Rays as rows, `k x n`.
    pub fn ray_matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn shape(&self) -> Shape {
        let (k, n) = (self.num_rays(), self.dim);
        if k == n {
            Shape::Simplicial
        } else if k == n + 1 {
            Shape::AlmostSimplicial
        } else {
            Shape::General
        }
    }

    /// Integer `m` with `<m, u> = 1` on every ray, if one exists.
    pub fn gorenstein_element(&self) -> Option<Vec<BigInt>> {
        let ones = vec![BigInt::one(); self.num_rays()];
        self.solver.solve(&ones).ok().flatten()
    }

    pub fn is_gorenstein(&self) -> bool {
        self.gorenstein_element().is_some()
    }

    /// Divisor of `v`: coefficient `ceil(<v, u>)` at every ray.
    pub fn ceil_divisor(&self, v: &RationalVector) -> Result<Divisor> {
        if v.len() != self.dim {
            return Err(crate::linalg::LinalgError::Dimension { left: self.dim, right: v.len() }.into());
        }
        Ok(Divisor(
            self.spec
                .rays
                .iter()
                .map(|u| {
                    let s = u
                        .iter()
                        .zip(&v.0)
                        .fold(Rational::zero(), |acc, (&a, x)| acc + x * BigInt::from(a));
                    s.ceil().to_integer()
                })
                .collect(),
        ))
    }

    /// `d1 ~ d2` iff `d1 - d2 = A m` for an integer `m`.
    pub fn lin_equiv(&self, d1: &Divisor, d2: &Divisor) -> Result<bool> {
        let diff = d1 - d2;
        Ok(self.solver.solve(&diff.0)?.is_some())
    }

    /// `A m` as a divisor: the principal divisor of the character `m`.
    pub fn principal(&self, m: &[BigInt]) -> Result<Divisor> {
        Ok(Divisor(self.matrix.mul_vec(m)?))
    }

    /// Indices of rays lying in the cone spanned by the others.
    pub fn non_extremal_rays(&self) -> Vec<usize> {
        let k = self.num_rays();
        (0..k)
            .filter(|&r| {
                let mut sys = LinearSystem::new(k - 1);
                let others: Vec<usize> = (0..k).filter(|&j| j != r).collect();
                for coord in 0..self.dim {
                    let row = others.iter().map(|&j| Rational::from_integer(BigInt::from(self.spec.rays[j][coord]))).collect();
                    let rhs = Rational::from_integer(BigInt::from(self.spec.rays[r][coord]));
                    sys.equal(row, rhs).expect("row length");
                }
                for i in 0..k - 1 {
                    let mut row = vec![Rational::zero(); k - 1];
                    row[i] = Rational::one();
                    sys.greater_eq(row, Rational::zero()).expect("row length");
                }
                sys.is_feasible()
            })
            .collect()
    }
}

fn pointed(matrix: &IntMatrix) -> Result<bool> {
    let mut sys = LinearSystem::new(matrix.cols());
    for i in 0..matrix.rows() {
        let row = matrix.row(i).iter().cloned().map(Rational::from_integer).collect();
        sys.greater(row, Rational::zero())?;
    }
    Ok(sys.is_feasible())
}

/// Cone over the quadrilateral with vertices `(0,0), (a,0), (0,1), (b,1)` placed at height one.
pub fn trapezoid_cone(a: i64, b: i64) -> Result<ConeSpec> {
    if a < 1 || b < 1 {
        return Err(Error::InvalidTrapezoid);
    }
    Ok(ConeSpec::new(vec![vec![0, 0, 1], vec![a, 0, 1], vec![0, 1, 1], vec![b, 1, 1]])
        .named(format!("trapezoid({a},{b})")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{big_vec, ratio};

    pub(crate) fn square() -> ConeSpec {
        ConeSpec::new(vec![vec![1, 0, 0], vec![0, 1, 0], vec![-1, 0, 1], vec![0, -1, 1]])
    }

    #[test]
    fn validate_examples() {
        assert!(square().validate().is_ok());
        assert_eq!(
            ConeSpec::new(vec![vec![2, 0], vec![0, 1]]).validate().unwrap_err(),
            Error::NonPrimitiveRay { index: 0 }
        );
        assert_eq!(
            ConeSpec::new(vec![vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]])
                .validate()
                .unwrap_err(),
            Error::NotPointed
        );
        assert_eq!(
            ConeSpec::new(vec![vec![1, 0, 0], vec![0, 1, 0]]).validate().unwrap_err(),
            Error::NotFullDimensional { rank: 2, dim: 3 }
        );
    }

    #[test]
    fn gorenstein_examples() {
        let c = square().validate().unwrap();
        assert_eq!(c.gorenstein_element(), Some(big_vec(&[1, 1, 2])));
        let std3 = ConeSpec::new(vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).validate().unwrap();
        assert_eq!(std3.gorenstein_element(), Some(big_vec(&[1, 1, 1])));
        // Square with one vertex lifted to height 2: no integer m is 1 on every ray.
        let lifted = ConeSpec::new(vec![vec![0, 0, 1], vec![1, 0, 1], vec![0, 1, 2], vec![1, 1, 1]])
            .validate()
            .unwrap();
        assert_eq!(lifted.gorenstein_element(), None);
        // Brute force over a box confirms the absence.
        for x in -5i64..=5 {
            for y in -5i64..=5 {
                for z in -5i64..=5 {
                    let ok = lifted.rays().iter().all(|u| u[0] * x + u[1] * y + u[2] * z == 1);
                    assert!(!ok);
                }
            }
        }
    }

    #[test]
    fn ceil_divisor_examples() {
        let c = square().validate().unwrap();
        assert_eq!(c.ceil_divisor(&RationalVector::zero(3)).unwrap(), Divisor::zero(4));
        let v_plus = RationalVector(vec![ratio(0, 1), ratio(-1, 4), ratio(0, 1)]);
        assert_eq!(c.ceil_divisor(&v_plus).unwrap(), Divisor::from_i64(&[0, 0, 0, 1]));
        let v_minus = RationalVector(vec![ratio(-1, 4), ratio(0, 1), ratio(0, 1)]);
        assert_eq!(c.ceil_divisor(&v_minus).unwrap(), Divisor::from_i64(&[0, 0, 1, 0]));
    }

    #[test]
    fn shape_examples() {
        let plane = ConeSpec::new(vec![vec![1, 0], vec![0, 1]]).validate().unwrap();
        assert_eq!(plane.shape(), Shape::Simplicial);
        assert_eq!(square().validate().unwrap().shape(), Shape::AlmostSimplicial);
        let hexagon = ConeSpec::new(vec![
            vec![1, 0, 0, 1],
            vec![0, 1, 0, 1],
            vec![0, 1, 1, 1],
            vec![0, 0, 1, 1],
            vec![1, 0, -1, 1],
            vec![0, 0, 0, 1],
        ])
        .validate()
        .unwrap();
        assert_eq!(hexagon.shape(), Shape::General);
    }

    #[test]
    fn lin_equiv_examples() {
        let c = square().validate().unwrap();
        assert!(c.lin_equiv(&Divisor::from_i64(&[1, 1, 0, 0]), &Divisor::zero(4)).unwrap());
        assert!(!c.lin_equiv(&Divisor::unit(4, 3), &Divisor::zero(4)).unwrap());
        let d = Divisor::from_i64(&[3, -1, 2, 0]);
        assert!(c.lin_equiv(&d, &d).unwrap());
    }

    #[test]
    fn extremality_lint() {
        assert!(square().validate().unwrap().non_extremal_rays().is_empty());
        let c = ConeSpec::new(vec![vec![1, 0], vec![1, 1], vec![0, 1]]).validate().unwrap();
        assert_eq!(c.non_extremal_rays(), vec![1]);
    }
}
