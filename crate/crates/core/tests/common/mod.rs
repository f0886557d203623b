//! Property checkers and generators shared by the property suites and the acceptance run.
#![allow(dead_code)]

use std::collections::BTreeSet;

use conic::complexes::Analysis;
use conic::linalg::{hermite_normal_form, ratio, smith_normal_form, IntMatrix, LinearSystem};
use conic::oracle::{grid_feasible, GridSpec};
use conic::paths::{facet_feasible, facet_system, valid_1d, valid_in_beta_space, BetaModel, ConeModel, PathModel, RaySubset};
use conic::search::FastChecker;
use conic::{ClassGroupData, Cone, ConeSpec, Divisor, LatticePoint};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

pub const CASES: u32 = 200;

pub fn config() -> Config {
    Config { cases: CASES, max_global_rejects: 100_000, failure_persistence: None, ..Config::default() }
}

/// Fixed-seed runner with [`CASES`] cases.
pub fn runner() -> TestRunner {
    TestRunner::new_with_rng(config(), TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

type Check = std::result::Result<(), TestCaseError>;

// ---- generators ----

/// Vertices of the convex hull in counterclockwise order, collinear points dropped.
pub fn hull(mut pts: Vec<(i64, i64)>) -> Vec<(i64, i64)> {
    pts.sort_unstable();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: (i64, i64), a: (i64, i64), b: (i64, i64)| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
    let mut lower: Vec<(i64, i64)> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<(i64, i64)> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn polygon_cone(vertices: &[(i64, i64)]) -> Option<Cone> {
    let rays = vertices.iter().map(|&(x, y)| vec![x, y, 1]).collect();
    ConeSpec::new(rays).validate().ok()
}

/// Cone over a lattice polygon with 3 to `max_vertices` vertices: Gorenstein.
pub fn gorenstein_cone(max_vertices: usize) -> impl Strategy<Value = Cone> {
    prop::collection::vec((-2i64..=2, -2i64..=2), 3..=7).prop_filter_map("degenerate polygon", move |pts| {
        let h = hull(pts);
        (h.len() >= 3 && h.len() <= max_vertices).then(|| polygon_cone(&h)).flatten()
    })
}

/// Cone over a lattice quadrilateral: Gorenstein and almost simplicial.
pub fn quadrilateral_cone() -> impl Strategy<Value = Cone> {
    prop::collection::vec((-3i64..=3, -3i64..=3), 4..=6).prop_filter_map("not a quadrilateral", |pts| {
        let h = hull(pts);
        (h.len() == 4).then(|| polygon_cone(&h)).flatten()
    })
}

/// Three-dimensional cone on 4 or 5 primitive rays of varying height, all extremal.
pub fn general_cone() -> impl Strategy<Value = Cone> {
    prop::collection::vec((-2i64..=2, -2i64..=2, 1i64..=3), 4..=5).prop_filter_map("not a valid cone", |rays| {
        let rays: Vec<Vec<i64>> = rays.into_iter().map(|(x, y, h)| vec![x, y, h]).collect();
        if rays.iter().any(|r| r.iter().fold(0i64, |g, &x| g.gcd(&x)) != 1) {
            return None;
        }
        let cone = ConeSpec::new(rays).validate().ok()?;
        cone.non_extremal_rays().is_empty().then_some(cone)
    })
}

/// Nonzero betas in `-3..=3` summing to zero, with two to three entries of each sign.
pub fn beta_list() -> impl Strategy<Value = Vec<i64>> {
    (prop::collection::vec(1i64..=3, 2..=3), prop::collection::vec(1i64..=3, 1..=2), any::<prop::sample::Index>())
        .prop_filter_map("does not balance", |(pos, neg, at)| {
            let last = pos.iter().sum::<i64>() - neg.iter().sum::<i64>();
            if !(1..=3).contains(&last) {
                return None;
            }
            let mut b: Vec<i64> = pos;
            b.extend(neg.iter().map(|x| -x));
            b.push(-last);
            let shift = at.index(b.len());
            b.rotate_left(shift);
            Some(b)
        })
}

fn divisor(cone: &Cone) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-2i64..=2, cone.num_rays())
}

// ---- properties ----

/// Feasibility depends only on the class of the divisor, and only on its free part.
pub fn facet_invariance((cone, d, m, mask): (Cone, Vec<i64>, Vec<i64>, u64)) -> Check {
    let k = cone.num_rays();
    let cg = ClassGroupData::compute(&cone).unwrap();
    let d = Divisor::from_i64(&d);
    let m: Vec<BigInt> = m.into_iter().map(BigInt::from).collect();
    let shifted = &d + &cone.principal(&m).unwrap();
    let p = cg.point_of(&d).unwrap();
    let canonical = cg.divisor_for_point(&p).unwrap();
    prop_assert_eq!(cg.point_of(&canonical).unwrap(), p.clone());
    let s = RaySubset(mask & ((1 << k) - 1));
    if s.is_empty() {
        return Ok(());
    }
    let f = facet_feasible(&cone, &d, s);
    prop_assert_eq!(f, facet_feasible(&cone, &shifted, s), "linear equivalence, subset {:?}", s);
    prop_assert_eq!(f, facet_feasible(&cone, &canonical, s), "torsion, subset {:?}", s);
    prop_assert_eq!(f, valid_in_beta_space(cg.betas(), s, &p), "beta space, subset {:?}", s);
    Ok(())
}

pub fn facet_invariance_input() -> impl Strategy<Value = (Cone, Vec<i64>, Vec<i64>, u64)> {
    general_cone().prop_flat_map(|c| {
        let d = divisor(&c);
        (Just(c), d, prop::collection::vec(-2i64..=2, 3), any::<u64>())
    })
}

/// Betas of a Gorenstein cone sum to zero and the zonotope points are symmetric about the origin.
pub fn gorenstein_symmetry(cone: Cone) -> Check {
    let m = ConeModel::new(cone).unwrap();
    let r = m.class_group().free_rank();
    let sum = m.class_group().beta_sum(0..m.cone().num_rays()).unwrap();
    prop_assert_eq!(sum, LatticePoint::origin(r));
    let pts: BTreeSet<&LatticePoint> = m.lattice_points().iter().collect();
    for p in &pts {
        prop_assert!(pts.contains(&p.neg()), "{} present but {} missing", p, p.neg());
    }
    Ok(())
}

/// `mult(Q, l, K_P) = mult(-P, l, K_{-Q})` on Gorenstein cones; `0` sits in degree `n` of `K_0`.
pub fn degree_symmetry(cone: Cone) -> Check {
    let n = cone.dim();
    let m = ConeModel::new(cone).unwrap();
    let a = Analysis::build(&m).unwrap();
    for k in a.profiles() {
        let p = k.point();
        for (l, entries) in k.degrees() {
            for (q, &c) in entries {
                let dual = a.profile(&q.neg()).unwrap();
                prop_assert_eq!(c, dual.multiplicity(l, &p.neg()), "K_{} degree {} entry {}", p, l, q);
            }
        }
    }
    let origin = LatticePoint::origin(m.class_group().free_rank());
    let k0 = a.profile(&origin).unwrap();
    prop_assert!(k0.multiplicity(n, &origin) >= 1, "0 missing from degree {} of K_0", n);
    prop_assert_eq!(k0.length(), n);
    Ok(())
}

/// Swapping two rays with equal betas preserves validity.
pub fn equal_beta_interchange((betas, mask, end): (Vec<i64>, u64, i64)) -> Check {
    let k = betas.len();
    let s = RaySubset(mask & ((1 << k) - 1));
    let lifted: Vec<LatticePoint> = betas.iter().map(|&b| LatticePoint(vec![b])).collect();
    let end_pt = LatticePoint(vec![end]);
    for i in 0..k {
        for j in i + 1..k {
            if betas[i] != betas[j] || s.contains(i) == s.contains(j) {
                continue;
            }
            let t = RaySubset(s.0 ^ (1 << i) ^ (1 << j));
            prop_assert_eq!(valid_1d(&betas, s, end).unwrap(), valid_1d(&betas, t, end).unwrap());
            prop_assert_eq!(valid_in_beta_space(&lifted, s, &end_pt), valid_in_beta_space(&lifted, t, &end_pt));
        }
    }
    Ok(())
}

pub fn equal_beta_input() -> impl Strategy<Value = (Vec<i64>, u64, i64)> {
    // duplicate an entry of each sign so equal pairs always exist
    beta_list().prop_flat_map(|mut b| {
        let p = *b.iter().find(|&&x| x > 0).unwrap();
        let q = *b.iter().find(|&&x| x < 0).unwrap();
        b.push(q);
        b.push(p);
        (Just(b), any::<u64>(), -6i64..=6)
    })
}

/// Rewriting in any order reaches the same spliced profiles as dependency-order splicing.
pub fn splice_order_independence((betas, mask, picks): (Vec<i64>, u64, Vec<usize>)) -> Check {
    let a = Analysis::build(&BetaModel::new(betas).unwrap()).unwrap();
    let r = a.points().len();
    let set: Vec<LatticePoint> = (0..r).filter(|&i| mask >> i & 1 == 1).map(|i| a.points()[i].clone()).collect();
    if set.is_empty() {
        return Ok(());
    }
    let report = a.check_lockable(&set).unwrap();
    let Some(expected) = report.final_profiles else {
        return Ok(());
    };
    let mut step = 0usize;
    let got = a
        .splice_by_rewriting(
            &set,
            |len| {
                step += 1;
                picks[step % picks.len()] % len
            },
            100_000,
        )
        .unwrap();
    prop_assert_eq!(got, Some(expected));
    Ok(())
}

pub fn splice_input() -> impl Strategy<Value = (Vec<i64>, u64, Vec<usize>)> {
    (beta_list(), any::<u64>(), prop::collection::vec(any::<usize>(), 1..16))
}

/// The one-dimensional window test agrees with the facet system on almost-simplicial cones.
pub fn window_agreement(cone: Cone) -> Check {
    let m = ConeModel::new(cone).unwrap();
    let betas: Vec<i64> = m.class_group().betas().iter().map(|b| b.0[0]).collect();
    if betas.contains(&0) {
        return Ok(());
    }
    let k = betas.len();
    for p in m.lattice_points() {
        let d = m.class_group().divisor_for_point(p).unwrap();
        for s in RaySubset::all(k).filter(|s| !s.is_empty()) {
            prop_assert_eq!(valid_1d(&betas, s, p.0[0]).unwrap(), facet_feasible(m.cone(), &d, s), "{} {:?}", p, s);
        }
    }
    Ok(())
}

/// A grid witness is a witness: `grid_feasible` implies `feasible`.
pub fn grid_one_sided((sys, denominator): (LinearSystem, u64)) -> Check {
    let grid = GridSpec::with_denominator(denominator, 3).unwrap();
    if grid_feasible(&sys, &grid).unwrap() {
        prop_assert!(sys.is_feasible());
    }
    if !sys.is_feasible() {
        prop_assert!(!grid_feasible(&sys, &grid).unwrap());
    }
    Ok(())
}

pub fn linear_system() -> impl Strategy<Value = (LinearSystem, u64)> {
    let row = (prop::collection::vec(-3i64..=3, 2), -4i64..=4, 1i64..=3, 0u8..5);
    (prop::collection::vec(row, 1..=5), 2u64..=6).prop_map(|(rows, den)| {
        let mut sys = LinearSystem::new(2);
        for (coef, num, d, kind) in rows {
            let r = coef.iter().map(|&c| ratio(c, 1)).collect();
            let rhs = ratio(num, d);
            match kind {
                0 => sys.equal(r, rhs),
                1 => sys.less(r, rhs),
                2 => sys.less_eq(r, rhs),
                3 => sys.greater(r, rhs),
                _ => sys.greater_eq(r, rhs),
            }
            .unwrap();
        }
        (sys, den)
    })
}

/// Facet systems on cone-scaled grids: a grid hit is always a real solution.
pub fn grid_on_facets((cone, d, mask, denominator): (Cone, Vec<i64>, u64, u64)) -> Check {
    let s = RaySubset(mask & ((1 << cone.num_rays()) - 1));
    let sys = facet_system(&cone, &Divisor::from_i64(&d), s);
    let grid = GridSpec::for_cone(&cone, denominator, 2).unwrap();
    if grid_feasible(&sys, &grid).unwrap() {
        prop_assert!(sys.is_feasible());
    }
    Ok(())
}

pub fn grid_facet_input() -> impl Strategy<Value = (Cone, Vec<i64>, u64, u64)> {
    gorenstein_cone(5).prop_flat_map(|c| {
        let d = divisor(&c);
        (Just(c), d, any::<u64>(), 2u64..=8)
    })
}

fn is_unimodular(m: &IntMatrix) -> bool {
    m.determinant().map(|d| d.abs().is_one()).unwrap_or(false)
}

/// `U M V = D` with `D` diagonal, nonnegative and dividing down the diagonal; `W M = H` in Hermite form.
pub fn normal_forms(m: IntMatrix) -> Check {
    let s = smith_normal_form(&m);
    prop_assert_eq!(s.u.mul(&m).unwrap().mul(&s.v).unwrap(), s.d.clone());
    prop_assert!(is_unimodular(&s.u) && is_unimodular(&s.v));
    for i in 0..s.d.rows() {
        for j in 0..s.d.cols() {
            if i != j {
                prop_assert!(s.d[(i, j)].is_zero());
            }
        }
    }
    let diag = s.diagonal();
    for w in diag.windows(2) {
        prop_assert!(!w[0].is_negative());
        if w[0].is_zero() {
            prop_assert!(w[1].is_zero());
        } else {
            prop_assert!(w[1].is_multiple_of(&w[0]));
        }
    }

    let (w, h) = hermite_normal_form(&m);
    prop_assert_eq!(w.mul(&m).unwrap(), h.clone());
    prop_assert!(is_unimodular(&w));
    let mut last_pivot: Option<usize> = None;
    for i in 0..h.rows() {
        match h.row(i).iter().position(|x| !x.is_zero()) {
            None => {
                prop_assert!((i..h.rows()).all(|r| h.row(r).iter().all(Zero::is_zero)));
                break;
            }
            Some(c) => {
                prop_assert!(last_pivot.is_none_or(|lp| c > lp));
                let p = &h[(i, c)];
                prop_assert!(p.is_positive());
                for r in 0..i {
                    prop_assert!(!h[(r, c)].is_negative() && &h[(r, c)] < p);
                }
                last_pivot = Some(c);
            }
        }
    }
    prop_assert_eq!(s.rank(), m.rank());
    Ok(())
}

pub fn int_matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| {
        prop::collection::vec(-6i64..=6, r * c)
            .prop_map(move |v| IntMatrix::from_vec(r, c, v.into_iter().map(BigInt::from).collect()).unwrap())
    })
}

/// The bitmask checker agrees with profile splicing on every subset.
pub fn fast_matches_slow(betas: Vec<i64>) -> Check {
    let a = Analysis::build(&BetaModel::new(betas.clone()).unwrap()).unwrap();
    let fast = FastChecker::new(&a).unwrap();
    let r = a.points().len();
    for m in 1u64..(1 << r) {
        let set: Vec<LatticePoint> = (0..r).filter(|&i| m >> i & 1 == 1).map(|i| a.points()[i].clone()).collect();
        let slow = a.check_incredulous(&set).unwrap();
        prop_assert_eq!(fast.check(m), slow.lockable.then_some(slow.incredulous), "{:?} {:?}", betas, set);
    }
    Ok(())
}

/// Models agree: the beta-only model reproduces the cone model's profiles.
pub fn models_agree(cone: Cone) -> Check {
    let m = ConeModel::new(cone).unwrap();
    let Some(betas) = m.almost_simplicial_betas() else {
        return Ok(());
    };
    let b = BetaModel::new(betas).unwrap();
    prop_assert_eq!(m.lattice_points(), b.lattice_points());
    let (x, y) = (Analysis::build(&m).unwrap(), Analysis::build(&b).unwrap());
    prop_assert_eq!(x.profiles(), y.profiles());
    Ok(())
}

/// With `n >= 2` no profile stops at degree 0 or 1; the empty facet system is feasible at every point.
pub fn no_short_profiles(cone: Cone) -> Check {
    let n = cone.dim();
    let m = ConeModel::new(cone).unwrap();
    for p in m.lattice_points() {
        let d = m.class_group().divisor_for_point(p).unwrap();
        prop_assert!(facet_feasible(m.cone(), &d, RaySubset(0)), "empty system infeasible at {}", p);
    }
    let a = Analysis::build(&m).unwrap();
    if n >= 2 {
        for k in a.profiles() {
            prop_assert!(k.length() >= 2, "K_{} has length {}", k.point(), k.length());
        }
    }
    Ok(())
}

/// On Gorenstein quadrilateral cones the beta pattern `(p, q, -q, -p)` means two parallel edges.
pub fn trapezoid_readings_agree(cone: Cone) -> Check {
    use conic::almost_simplicial::{beta_mode, TrapezoidReading};
    let cg = ClassGroupData::compute(&cone).unwrap();
    let mode = beta_mode(&cg).unwrap();
    let r = TrapezoidReading::new(&mode, Some(&cone));
    prop_assert_eq!(Some(r.beta_pattern), r.lattice_trapezoid);
    Ok(())
}
