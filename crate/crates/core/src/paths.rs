//! Facet feasibility and valid paths between zonotope lattice points.

use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::class_group::{ClassGroupData, LatticePoint};
use crate::cone::{Cone, Divisor, Shape};
use crate::error::{Error, Result};
use crate::linalg::{IntMatrix, LinearSystem, Rational};
use crate::zonotope::Zonotope;

/// Subset of ray indices as a bit mask.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RaySubset(pub u64);

impl RaySubset {
    pub fn full(k: usize) -> Self {
        RaySubset(if k >= 64 { u64::MAX } else { (1u64 << k) - 1 })
    }

    pub fn from_indices(idx: &[usize]) -> Self {
        RaySubset(idx.iter().fold(0, |m, &i| m | 1 << i))
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&i| self.contains(i))
    }

    pub fn indices(self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn complement(self, k: usize) -> Self {
        RaySubset(!self.0 & Self::full(k).0)
    }

    pub fn all(k: usize) -> impl Iterator<Item = RaySubset> {
        (0..=Self::full(k).0).map(RaySubset)
    }
}

/// A valid path `start + sum_{J} beta = end` of the given length.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PathSpec {
    pub subset: Vec<usize>,
    pub start: LatticePoint,
    pub end: LatticePoint,
    pub length: usize,
}

/// `d_r - 1 < <x, u_r> < d_r` off the subset, `<x, u_r> = d_r` on it.
pub fn facet_system(cone: &Cone, d: &Divisor, subset: RaySubset) -> LinearSystem {
    let mut sys = LinearSystem::new(cone.dim());
    let a = cone.ray_matrix();
    for (r, coeff) in d.0.iter().enumerate() {
        let row: Vec<Rational> = a.row(r).iter().cloned().map(Rational::from_integer).collect();
        let rhs = Rational::from_integer(coeff.clone());
        if subset.contains(r) {
            sys.equal(row, rhs).expect("row length");
        } else {
            sys.greater(row.clone(), &rhs - Rational::one()).expect("row length");
            sys.less(row, rhs).expect("row length");
        }
    }
    sys
}

pub fn facet_feasible(cone: &Cone, d: &Divisor, subset: RaySubset) -> bool {
    facet_system(cone, d, subset).is_feasible()
}

/// Window test for one-dimensional betas: with `k = sum_J beta` and `l = end`, valid iff
/// `sum_{J^c, beta<0} beta < l - k < sum_{J^c, beta>0} beta`; for `J` = all rays, iff `l = k`.
pub fn valid_1d(betas: &[i64], subset: RaySubset, end: i64) -> Result<bool> {
    if betas.contains(&0) {
        return Err(Error::ZeroBetaUnsupported);
    }
    let mut k = 0i64;
    let (mut lo, mut hi) = (0i64, 0i64);
    for (r, &b) in betas.iter().enumerate() {
        if subset.contains(r) {
            k += b;
        } else if b < 0 {
            lo += b;
        } else {
            hi += b;
        }
    }
    let t = end - k;
    if subset == RaySubset::full(betas.len()) {
        return Ok(t == 0);
    }
    Ok(lo < t && t < hi)
}

/// Validity read off the betas alone: some `y` in `(-1, 0)^{J^c}` has `sum y_r beta_r = end`;
/// for `J` = all rays, `end` must be the origin.
pub fn valid_in_beta_space(betas: &[LatticePoint], subset: RaySubset, end: &LatticePoint) -> bool {
    let off: Vec<usize> = (0..betas.len()).filter(|&r| !subset.contains(r)).collect();
    if off.is_empty() {
        return end.is_origin();
    }
    let mut sys = LinearSystem::new(off.len());
    for (c, &target) in end.0.iter().enumerate() {
        let row = off.iter().map(|&r| Rational::from_integer(betas[r].0[c].into())).collect();
        sys.equal(row, Rational::from_integer(target.into())).expect("row length");
    }
    for i in 0..off.len() {
        let mut row = vec![Rational::from_integer(0.into()); off.len()];
        row[i] = Rational::one();
        sys.greater(row.clone(), -Rational::one()).expect("row length");
        sys.less(row, Rational::from_integer(0.into())).expect("row length");
    }
    sys.is_feasible()
}

/// Source of valid paths into each lattice point.
pub trait PathModel: Sync {
    /// Cone dimension: the expected length of full-length complexes.
    fn dim(&self) -> usize;
    fn num_rays(&self) -> usize;
    fn lattice_points(&self) -> &[LatticePoint];
    /// Valid paths ending at `p`, including the empty path, sorted by `(length, subset)`.
    fn valid_paths_into(&self, p: &LatticePoint) -> Result<Vec<PathSpec>>;
    /// Rank-one Gorenstein almost-simplicial data with nonzero betas, when applicable.
    fn almost_simplicial_betas(&self) -> Option<Vec<i64>>;
    fn betas(&self) -> Vec<LatticePoint>;
    /// Homological degree contributed by a path along `s`.
    fn path_length(&self, s: RaySubset) -> usize;
}

/// Subsets grouped by `(sum of betas, path length)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusRow {
    pub sum: LatticePoint,
    pub length: usize,
    pub count: usize,
    /// Smallest subset in the group.
    pub example: Vec<usize>,
}

/// Every subset of rays, grouped; rows sorted by `(sum, length)`.
pub fn path_census<M: PathModel + ?Sized>(model: &M) -> Result<Vec<CensusRow>> {
    let betas = model.betas();
    let dim = betas.first().map_or(0, |b| b.dim());
    let mut rows: std::collections::BTreeMap<(LatticePoint, usize), CensusRow> = Default::default();
    for s in RaySubset::all(model.num_rays()) {
        let sum = s.iter().try_fold(LatticePoint::origin(dim), |acc, r| acc.checked_add(&betas[r]))?;
        let length = model.path_length(s);
        let row = rows.entry((sum.clone(), length)).or_insert_with(|| CensusRow {
            sum,
            length,
            count: 0,
            example: s.indices(),
        });
        row.count += 1;
    }
    Ok(rows.into_values().collect())
}

fn sort_paths(paths: &mut [PathSpec]) {
    paths.sort_by(|a, b| (a.length, &a.subset).cmp(&(b.length, &b.subset)));
}

/// Full cone data: divisor-level facet systems.
#[derive(Clone, Debug)]
pub struct ConeModel {
    cone: Cone,
    class_group: ClassGroupData,
    zonotope: Zonotope,
    ranks: Vec<usize>,
}

impl ConeModel {
    pub fn new(cone: Cone) -> Result<Self> {
        let class_group = ClassGroupData::compute(&cone)?;
        let zonotope = Zonotope::new(class_group.betas().to_vec(), class_group.free_rank())?;
        let k = cone.num_rays();
        let a = cone.ray_matrix();
        let ranks = RaySubset::all(k)
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|s| a.select_rows(&s.indices()).rank())
            .collect();
        Ok(ConeModel { cone, class_group, zonotope, ranks })
    }

    pub fn cone(&self) -> &Cone {
        &self.cone
    }

    pub fn class_group(&self) -> &ClassGroupData {
        &self.class_group
    }

    pub fn zonotope(&self) -> &Zonotope {
        &self.zonotope
    }

    /// Rank of the rows indexed by the subset.
    pub fn subset_rank(&self, s: RaySubset) -> usize {
        self.ranks[s.0 as usize]
    }

    pub fn ray_submatrix(&self, s: RaySubset) -> IntMatrix {
        self.cone.ray_matrix().select_rows(&s.indices())
    }

    fn check_point(&self, p: &LatticePoint) -> Result<()> {
        if p.dim() != self.class_group.free_rank() {
            return Err(Error::PointDimension {
                point: p.clone(),
                expected: self.class_group.free_rank(),
                found: p.dim(),
            });
        }
        if !self.zonotope.is_lattice_point(p) {
            return Err(Error::PointOutsideZonotope(p.clone()));
        }
        Ok(())
    }

    /// Subsets `J` whose facet system for the divisor of `p` is feasible.
    pub fn feasible_subsets(&self, p: &LatticePoint) -> Result<Vec<RaySubset>> {
        let d = self.class_group.divisor_for_point(p)?;
        let k = self.cone.num_rays();
        Ok(RaySubset::all(k)
            .collect::<Vec<_>>()
            .into_par_iter()
            .filter(|&s| s.is_empty() || facet_feasible(&self.cone, &d, s))
            .collect())
    }
}

impl PathModel for ConeModel {
    fn dim(&self) -> usize {
        self.cone.dim()
    }

    fn num_rays(&self) -> usize {
        self.cone.num_rays()
    }

    fn lattice_points(&self) -> &[LatticePoint] {
        self.zonotope.lattice_points()
    }

    fn valid_paths_into(&self, p: &LatticePoint) -> Result<Vec<PathSpec>> {
        self.check_point(p)?;
        let mut paths = self
            .feasible_subsets(p)?
            .into_iter()
            .map(|s| {
                let sum = self.class_group.beta_sum(s.iter())?;
                Ok(PathSpec {
                    subset: s.indices(),
                    start: p.checked_sub(&sum)?,
                    end: p.clone(),
                    length: self.subset_rank(s),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        sort_paths(&mut paths);
        Ok(paths)
    }

    fn almost_simplicial_betas(&self) -> Option<Vec<i64>> {
        if self.cone.shape() != Shape::AlmostSimplicial || !self.cone.is_gorenstein() {
            return None;
        }
        let betas: Vec<i64> = self.class_group.betas().iter().map(|b| b.0[0]).collect();
        betas.iter().all(|&b| b != 0).then_some(betas)
    }

    fn betas(&self) -> Vec<LatticePoint> {
        self.class_group.betas().to_vec()
    }

    fn path_length(&self, s: RaySubset) -> usize {
        self.subset_rank(s)
    }
}

/// One-dimensional betas of a Gorenstein almost-simplicial cone, without ray data.
#[derive(Clone, Debug)]
pub struct BetaModel {
    betas: Vec<i64>,
    zonotope: Zonotope,
}

impl BetaModel {
    pub fn new(betas: Vec<i64>) -> Result<Self> {
        if betas.contains(&0) {
            return Err(Error::ZeroBetaUnsupported);
        }
        if betas.len() < 2 || betas.len() > crate::cone::MAX_RAYS {
            return Err(Error::InvalidBetas(format!("{} entries", betas.len())));
        }
        if betas.iter().sum::<i64>() != 0 {
            return Err(Error::InvalidBetas("entries must sum to zero".into()));
        }
        let zonotope = Zonotope::new(betas.iter().map(|&b| LatticePoint(vec![b])).collect(), 1)?;
        Ok(BetaModel { betas, zonotope })
    }

    pub fn betas(&self) -> &[i64] {
        &self.betas
    }

    pub fn zonotope(&self) -> &Zonotope {
        &self.zonotope
    }
}

impl PathModel for BetaModel {
    fn dim(&self) -> usize {
        self.betas.len() - 1
    }

    fn num_rays(&self) -> usize {
        self.betas.len()
    }

    fn lattice_points(&self) -> &[LatticePoint] {
        self.zonotope.lattice_points()
    }

    fn valid_paths_into(&self, p: &LatticePoint) -> Result<Vec<PathSpec>> {
        if p.dim() != 1 {
            return Err(Error::PointDimension { point: p.clone(), expected: 1, found: p.dim() });
        }
        if !self.zonotope.is_lattice_point(p) {
            return Err(Error::PointOutsideZonotope(p.clone()));
        }
        let k = self.betas.len();
        let end = p.0[0];
        let mut paths = Vec::new();
        for s in RaySubset::all(k) {
            if !s.is_empty() && !valid_1d(&self.betas, s, end)? {
                continue;
            }
            let sum: i64 = s.iter().map(|r| self.betas[r]).sum();
            let length = self.path_length(s);
            paths.push(PathSpec {
                subset: s.indices(),
                start: LatticePoint(vec![end - sum]),
                end: p.clone(),
                length,
            });
        }
        sort_paths(&mut paths);
        Ok(paths)
    }

    fn almost_simplicial_betas(&self) -> Option<Vec<i64>> {
        Some(self.betas.clone())
    }

    fn betas(&self) -> Vec<LatticePoint> {
        self.betas.iter().map(|&b| LatticePoint(vec![b])).collect()
    }

    fn path_length(&self, s: RaySubset) -> usize {
        if s == RaySubset::full(self.betas.len()) {
            self.betas.len() - 1
        } else {
            s.len()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::ConeSpec;

    fn square() -> Cone {
        ConeSpec::new(vec![vec![1, 0, 0], vec![0, 1, 0], vec![-1, 0, 1], vec![0, -1, 1]])
            .with_class_basis(vec![vec![1, -1, 1, -1]])
            .validate()
            .unwrap()
    }

    #[test]
    fn facet_examples() {
        let c = square();
        let d_plus = Divisor::from_i64(&[0, 0, 0, 1]);
        assert!(!facet_feasible(&c, &d_plus, RaySubset::from_indices(&[0, 1])));
        assert!(facet_feasible(&c, &Divisor::zero(4), RaySubset::full(4)));
        assert!(facet_feasible(&c, &d_plus, RaySubset::from_indices(&[0])));
    }

    fn summary(paths: &[PathSpec]) -> Vec<(Vec<usize>, i64, usize)> {
        paths.iter().map(|p| (p.subset.clone(), p.start.0[0], p.length)).collect()
    }

    #[test]
    fn square_paths_into_origin() {
        let m = ConeModel::new(square()).unwrap();
        let paths = m.valid_paths_into(&LatticePoint(vec![0])).unwrap();
        assert_eq!(
            summary(&paths),
            vec![
                (vec![], 0, 0),
                (vec![0], -1, 1),
                (vec![1], 1, 1),
                (vec![2], -1, 1),
                (vec![3], 1, 1),
                (vec![0, 1], 0, 2),
                (vec![0, 3], 0, 2),
                (vec![1, 2], 0, 2),
                (vec![2, 3], 0, 2),
                (vec![0, 1, 2, 3], 0, 3),
            ]
        );
    }

    #[test]
    fn square_paths_into_one() {
        let m = ConeModel::new(square()).unwrap();
        let paths = m.valid_paths_into(&LatticePoint(vec![1])).unwrap();
        assert_eq!(
            summary(&paths),
            vec![(vec![], 1, 0), (vec![0], 0, 1), (vec![2], 0, 1), (vec![0, 2], -1, 2)]
        );
        assert_eq!(
            m.valid_paths_into(&LatticePoint(vec![2])).unwrap_err(),
            Error::PointOutsideZonotope(LatticePoint(vec![2]))
        );
    }

    #[test]
    fn beta_space_route_on_square() {
        let m = ConeModel::new(square()).unwrap();
        let betas = m.betas();
        for p in m.lattice_points() {
            let d = m.class_group().divisor_for_point(p).unwrap();
            for s in RaySubset::all(4).filter(|s| !s.is_empty()) {
                assert_eq!(valid_in_beta_space(&betas, s, p), facet_feasible(m.cone(), &d, s), "{p} {s:?}");
            }
        }
    }

    #[test]
    fn census_of_square() {
        let rows = path_census(&BetaModel::new(vec![1, -1, 1, -1]).unwrap()).unwrap();
        assert_eq!(rows.iter().map(|r| r.count).sum::<usize>(), 16);
        let full = rows.iter().find(|r| r.length == 3 && r.sum.is_origin()).unwrap();
        assert_eq!((full.sum.0[0], full.count, full.example.len()), (0, 1, 4));
    }

    #[test]
    fn valid_1d_examples() {
        let b = [1, -1, 1, -1];
        assert!(valid_1d(&b, RaySubset::from_indices(&[0]), 0).unwrap());
        assert!(!valid_1d(&b, RaySubset::from_indices(&[0, 2, 1]), 0).unwrap());
        assert!(valid_1d(&b, RaySubset::full(4), 0).unwrap());
        assert!(!valid_1d(&b, RaySubset::full(4), 1).unwrap());
        assert_eq!(valid_1d(&[1, 0, -1], RaySubset(1), 0), Err(Error::ZeroBetaUnsupported));
    }

    #[test]
    fn beta_model_matches_cone_model_on_square() {
        let cm = ConeModel::new(square()).unwrap();
        let bm = BetaModel::new(vec![1, -1, 1, -1]).unwrap();
        assert_eq!(cm.lattice_points(), bm.lattice_points());
        for p in cm.lattice_points() {
            assert_eq!(cm.valid_paths_into(p).unwrap(), bm.valid_paths_into(p).unwrap());
        }
    }
}
