//! Degree-wise complex profiles, splicing, and lockable / incredulous sets.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;
use serde::de::Error as _;
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::class_group::LatticePoint;
use crate::error::{Error, Result};
use crate::paths::PathModel;

/// Multiset of lattice points per homological degree; degree 0 holds the point itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexProfile {
    point: LatticePoint,
    degrees: BTreeMap<usize, BTreeMap<LatticePoint, u64>>,
}

impl ComplexProfile {
    pub fn new(point: LatticePoint) -> Self {
        let mut degrees = BTreeMap::new();
        degrees.insert(0, BTreeMap::from([(point.clone(), 1)]));
        ComplexProfile { point, degrees }
    }

    /// Builds a profile from `(degree, point, multiplicity)` entries at positive degrees.
    pub fn from_entries(
        point: LatticePoint,
        entries: impl IntoIterator<Item = (usize, LatticePoint, u64)>,
    ) -> Result<Self> {
        let mut k = Self::new(point);
        for (deg, q, m) in entries {
            k.add(deg, q, m)?;
        }
        Ok(k)
    }

    pub fn point(&self) -> &LatticePoint {
        &self.point
    }

    /// Highest degree with a nonempty entry.
    pub fn length(&self) -> usize {
        self.degrees.keys().next_back().copied().unwrap_or(0)
    }

    pub fn degree(&self, d: usize) -> Option<&BTreeMap<LatticePoint, u64>> {
        self.degrees.get(&d)
    }

    pub fn degrees(&self) -> impl Iterator<Item = (usize, &BTreeMap<LatticePoint, u64>)> {
        self.degrees.iter().map(|(d, m)| (*d, m))
    }

    pub fn multiplicity(&self, degree: usize, q: &LatticePoint) -> u64 {
        self.degrees.get(&degree).and_then(|m| m.get(q)).copied().unwrap_or(0)
    }

    /// Adds `mult` copies of `q` at a positive degree.
    pub fn add(&mut self, degree: usize, q: LatticePoint, mult: u64) -> Result<()> {
        if degree == 0 || mult == 0 {
            return Ok(());
        }
        let slot = self.degrees.entry(degree).or_default().entry(q).or_insert(0);
        *slot = slot.checked_add(mult).ok_or(Error::MultiplicityOverflow)?;
        Ok(())
    }

    /// Points at positive degree.
    pub fn positive_support(&self) -> BTreeSet<&LatticePoint> {
        self.degrees.range(1..).flat_map(|(_, m)| m.keys()).collect()
    }

    pub fn appears_positively(&self, q: &LatticePoint) -> bool {
        self.degrees.range(1..).any(|(_, m)| m.contains_key(q))
    }

    /// Total multiplicity at each degree.
    pub fn ranks(&self) -> BTreeMap<usize, u64> {
        self.degrees.iter().map(|(d, m)| (*d, m.values().sum())).collect()
    }
}

/// Replaces each positive-degree occurrence of `j` in `k` (degree `l`, multiplicity `c`) by the
/// positive-degree part of `kj`, shifting degree `d` to `l + d - 1` and scaling by `c`.
pub fn substitute(k: &ComplexProfile, j: &LatticePoint, kj: &ComplexProfile) -> Result<ComplexProfile> {
    if j == k.point() {
        return Err(Error::SelfSubstitution);
    }
    if kj.point() != j {
        return Err(Error::ProfileMismatch { expected: j.clone(), found: kj.point().clone() });
    }
    let mut out = ComplexProfile::new(k.point.clone());
    for (&l, entries) in k.degrees.range(1..) {
        for (q, &c) in entries {
            if q != j {
                out.add(l, q.clone(), c)?;
                continue;
            }
            for (&d, sub) in kj.degrees.range(1..) {
                for (r, &m) in sub {
                    let mult = c.checked_mul(m).ok_or(Error::MultiplicityOverflow)?;
                    out.add(l + d - 1, r.clone(), mult)?;
                }
            }
        }
    }
    Ok(out)
}

impl Serialize for ComplexProfile {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Degrees<'a>(&'a BTreeMap<usize, BTreeMap<LatticePoint, u64>>);
        impl Serialize for Degrees<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut map = s.serialize_map(Some(self.0.len()))?;
                for (d, entries) in self.0 {
                    let list: Vec<Entry> =
                        entries.iter().map(|(p, &m)| Entry { point: p.clone(), mult: m }).collect();
                    map.serialize_entry(&d.to_string(), &list)?;
                }
                map.end()
            }
        }
        let mut map = s.serialize_map(Some(3))?;
        map.serialize_entry("point", &self.point)?;
        map.serialize_entry("degrees", &Degrees(&self.degrees))?;
        map.serialize_entry("length", &self.length())?;
        map.end()
    }
}

#[derive(Serialize, Deserialize)]
struct Entry {
    point: LatticePoint,
    mult: u64,
}

#[derive(Deserialize)]
struct ProfileRecord {
    point: LatticePoint,
    degrees: BTreeMap<String, Vec<Entry>>,
}

impl<'de> Deserialize<'de> for ComplexProfile {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rec = ProfileRecord::deserialize(d)?;
        let mut k = ComplexProfile::new(rec.point.clone());
        for (deg, entries) in rec.degrees {
            let deg: usize = deg.parse().map_err(D::Error::custom)?;
            if deg == 0 {
                let ok = entries.len() == 1 && entries[0].point == rec.point && entries[0].mult == 1;
                if !ok {
                    return Err(D::Error::custom("degree 0 must hold exactly the point itself"));
                }
                continue;
            }
            for e in entries {
                k.add(deg, e.point, e.mult).map_err(D::Error::custom)?;
            }
        }
        Ok(k)
    }
}

/// Profiles of every lattice point of a model.
#[derive(Clone, Debug)]
pub struct Analysis {
    dim: usize,
    points: Vec<LatticePoint>,
    index: HashMap<LatticePoint, usize>,
    profiles: Vec<ComplexProfile>,
    almost_simplicial_betas: Option<Vec<i64>>,
}

/// Profile of `p`: each nonempty valid path of length `l` contributes its start at degree `l`.
pub fn build_profile<M: PathModel + ?Sized>(model: &M, p: &LatticePoint) -> Result<ComplexProfile> {
    let mut k = ComplexProfile::new(p.clone());
    for path in model.valid_paths_into(p)? {
        if !path.subset.is_empty() {
            k.add(path.length, path.start, 1)?;
        }
    }
    Ok(k)
}

impl Analysis {
    pub fn build<M: PathModel + ?Sized>(model: &M) -> Result<Self> {
        let points = model.lattice_points().to_vec();
        let profiles = points
            .par_iter()
            .map(|p| build_profile(model, p))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_profiles(model.dim(), profiles, model.almost_simplicial_betas()))
    }

    /// Assembles an analysis from precomputed profiles (sorted by point).
    pub fn from_profiles(
        dim: usize,
        mut profiles: Vec<ComplexProfile>,
        almost_simplicial_betas: Option<Vec<i64>>,
    ) -> Self {
        profiles.sort_by(|a, b| a.point.cmp(&b.point));
        let points: Vec<LatticePoint> = profiles.iter().map(|k| k.point.clone()).collect();
        let index = points.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        Analysis { dim, points, index, profiles, almost_simplicial_betas }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    pub fn profiles(&self) -> &[ComplexProfile] {
        &self.profiles
    }

    pub fn almost_simplicial_betas(&self) -> Option<&[i64]> {
        self.almost_simplicial_betas.as_deref()
    }

    pub fn index_of(&self, p: &LatticePoint) -> Result<usize> {
        self.index.get(p).copied().ok_or_else(|| Error::PointOutsideZonotope(p.clone()))
    }

    pub fn profile(&self, p: &LatticePoint) -> Result<&ComplexProfile> {
        Ok(&self.profiles[self.index_of(p)?])
    }

    /// Successor indices of each point: `q` appears at positive degree in the profile of `p`.
    pub fn dependency_graph(&self) -> Vec<Vec<usize>> {
        self.profiles
            .iter()
            .map(|k| k.positive_support().into_iter().map(|q| self.index[q]).collect())
            .collect()
    }

    fn member_mask(&self, set: &[LatticePoint]) -> Result<Vec<bool>> {
        if set.is_empty() {
            return Err(Error::EmptySet);
        }
        let mut member = vec![false; self.points.len()];
        for p in set {
            member[self.index_of(p)?] = true;
        }
        Ok(member)
    }

    /// Splices the complexes of all excluded points reachable from `set`, in dependency order.
    pub fn check_lockable(&self, set: &[LatticePoint]) -> Result<LockReport> {
        let member = self.member_mask(set)?;
        let graph = self.dependency_graph();
        let n = self.points.len();

        let mut reach = vec![false; n];
        let mut stack: Vec<usize> = (0..n).filter(|&i| member[i]).collect();
        while let Some(v) = stack.pop() {
            for &w in &graph[v] {
                if !member[w] && !reach[w] {
                    reach[w] = true;
                    stack.push(w);
                }
            }
        }

        // Peel sinks of the reachable excluded subgraph; what remains contains a cycle.
        let mut alive = reach.clone();
        let mut order = Vec::new();
        loop {
            let sinks: Vec<usize> =
                (0..n).filter(|&v| alive[v] && graph[v].iter().all(|&w| !alive[w])).collect();
            if sinks.is_empty() {
                break;
            }
            for v in sinks {
                alive[v] = false;
                order.push(v);
            }
        }
        if let Some(start) = (0..n).find(|&v| alive[v]) {
            let cycle = find_cycle(&graph, &alive, start);
            return Ok(LockReport {
                lockable: false,
                incredulous: false,
                final_profiles: None,
                cycle_witness: Some(cycle.into_iter().map(|i| self.points[i].clone()).collect()),
            });
        }

        let mut finals: HashMap<usize, ComplexProfile> = HashMap::new();
        for &v in &order {
            let k = self.splice_excluded(&self.profiles[v], &graph[v], &member, &finals)?;
            finals.insert(v, k);
        }
        let mut out = BTreeMap::new();
        for i in (0..n).filter(|&i| member[i]) {
            let k = self.splice_excluded(&self.profiles[i], &graph[i], &member, &finals)?;
            out.insert(self.points[i].clone(), k);
        }
        Ok(LockReport { lockable: true, incredulous: false, final_profiles: Some(out), cycle_witness: None })
    }

    fn splice_excluded(
        &self,
        k: &ComplexProfile,
        succ: &[usize],
        member: &[bool],
        finals: &HashMap<usize, ComplexProfile>,
    ) -> Result<ComplexProfile> {
        let mut k = k.clone();
        for &w in succ {
            if !member[w] {
                k = substitute(&k, &self.points[w], &finals[&w])?;
            }
        }
        Ok(k)
    }

    /// Lockable, and every spliced profile has length equal to the cone dimension.
    pub fn check_incredulous(&self, set: &[LatticePoint]) -> Result<LockReport> {
        let mut report = self.check_lockable(set)?;
        if let Some(finals) = &report.final_profiles {
            report.incredulous = finals.values().all(|k| k.length() == self.dim);
        }
        Ok(report)
    }

    /// Splices by repeated substitution of raw complexes, letting `choose` pick which pending
    /// occurrence to expand next. Returns `None` if `max_steps` is exhausted.
    pub fn splice_by_rewriting(
        &self,
        set: &[LatticePoint],
        mut choose: impl FnMut(usize) -> usize,
        max_steps: usize,
    ) -> Result<Option<BTreeMap<LatticePoint, ComplexProfile>>> {
        let member = self.member_mask(set)?;
        let mut current: Vec<ComplexProfile> = (0..self.points.len())
            .filter(|&i| member[i])
            .map(|i| self.profiles[i].clone())
            .collect();
        for _ in 0..max_steps {
            let pending: Vec<(usize, usize)> = current
                .iter()
                .enumerate()
                .flat_map(|(ci, k)| {
                    k.positive_support()
                        .into_iter()
                        .map(|q| self.index[q])
                        .filter(|&q| !member[q])
                        .map(move |q| (ci, q))
                        .collect::<Vec<_>>()
                })
                .collect();
            if pending.is_empty() {
                return Ok(Some(current.into_iter().map(|k| (k.point.clone(), k)).collect()));
            }
            let (ci, q) = pending[choose(pending.len()) % pending.len()];
            current[ci] = substitute(&current[ci], &self.points[q], &self.profiles[q])?;
        }
        Ok(None)
    }
}

fn find_cycle(graph: &[Vec<usize>], alive: &[bool], start: usize) -> Vec<usize> {
    let mut path = vec![start];
    let mut pos: HashMap<usize, usize> = HashMap::from([(start, 0)]);
    let mut v = start;
    loop {
        let w = *graph[v].iter().find(|&&w| alive[w]).expect("every remaining node has a live successor");
        if let Some(&i) = pos.get(&w) {
            return path[i..].to_vec();
        }
        pos.insert(w, path.len());
        path.push(w);
        v = w;
    }
}

/// Outcome of a lockability check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LockReport {
    pub lockable: bool,
    pub incredulous: bool,
    pub final_profiles: Option<BTreeMap<LatticePoint, ComplexProfile>>,
    pub cycle_witness: Option<Vec<LatticePoint>>,
}
