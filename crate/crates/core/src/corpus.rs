//! Transcribed reference complexes and their comparison against computed profiles.
//!
//! A transcription that disagrees with the computation is reported as display-inconsistent,
//! rather than as a mismatch, only when it fails a check that needs no profile computation:
//! degree 0 must be the point itself, the alternating multiplicity sum must vanish, and every
//! entry needs enough subsets with the right beta sum and path length.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::almost_simplicial::{beta_mode, classify, BetaMode, BetaSystem, Classification, Verdict};
use crate::class_group::LatticePoint;
use crate::complexes::{Analysis, ComplexProfile};
use crate::cone::{ConeSpec, RationalVector};
use crate::error::{Error, Result};
use crate::oracle::{enumerate_chambers, GridSpec};
use crate::paths::{path_census, BetaModel, ConeModel, PathModel};
use crate::search::{find_incredulous, SearchConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExampleId {
    Fms710,
    Hexagon,
    K4,
    Beta21111,
    Beta111111,
    Beta21122,
    Beta22233,
    Beta221111,
}

impl ExampleId {
    pub const ALL: [ExampleId; 8] = [
        ExampleId::Fms710,
        ExampleId::Hexagon,
        ExampleId::K4,
        ExampleId::Beta21111,
        ExampleId::Beta111111,
        ExampleId::Beta21122,
        ExampleId::Beta22233,
        ExampleId::Beta221111,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExampleId::Fms710 => "fms710",
            ExampleId::Hexagon => "hexagon",
            ExampleId::K4 => "k4",
            ExampleId::Beta21111 => "beta21111",
            ExampleId::Beta111111 => "beta111111",
            ExampleId::Beta21122 => "beta21122",
            ExampleId::Beta22233 => "beta22233",
            ExampleId::Beta221111 => "beta221111",
        }
    }

    fn source(self) -> &'static str {
        match self {
            ExampleId::Fms710 => include_str!("../fixtures/fms710.json"),
            ExampleId::Hexagon => include_str!("../fixtures/hexagon.json"),
            ExampleId::K4 => include_str!("../fixtures/k4.json"),
            ExampleId::Beta21111 => include_str!("../fixtures/beta21111.json"),
            ExampleId::Beta111111 => include_str!("../fixtures/beta111111.json"),
            ExampleId::Beta21122 => include_str!("../fixtures/beta21122.json"),
            ExampleId::Beta22233 => include_str!("../fixtures/beta22233.json"),
            ExampleId::Beta221111 => include_str!("../fixtures/beta221111.json"),
        }
    }

    pub fn fixture(self) -> Result<Fixture> {
        serde_json::from_str(self.source()).map_err(|e| Error::Fixture(format!("{}: {e}", self.name())))
    }
}

impl fmt::Display for ExampleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExampleId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        ExampleId::ALL.into_iter().find(|e| e.name() == s).ok_or_else(|| {
            let names: Vec<&str> = ExampleId::ALL.iter().map(|e| e.name()).collect();
            format!("unknown example {s:?}; expected one of {}", names.join(", "))
        })
    }
}

/// One transcribed complex: terms from the top degree down to degree 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DisplayFixture {
    pub point: String,
    pub terms: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplicedFixture {
    pub set: Vec<String>,
    pub displays: Vec<DisplayFixture>,
}

/// Path between labelled points; ray numbers start at 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathFixture {
    pub from: String,
    pub to: String,
    pub ray_numbers: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CensusFixture {
    pub sum: Vec<i64>,
    pub length: usize,
    pub count: usize,
    pub ray_numbers: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassificationFixture {
    pub verdict: Verdict,
    #[serde(default)]
    pub witness: Option<Vec<i64>>,
}

/// Expected data for one example. Points are written as labels: explicit coordinates,
/// rational vectors `v` (mapped to the class of `-d(v)`), or `A<k>` for the point `k` on a line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fixture {
    pub example: String,
    pub anchor: String,
    #[serde(default)]
    pub rays: Option<Vec<Vec<i64>>>,
    #[serde(default)]
    pub class_basis: Option<Vec<Vec<i64>>>,
    #[serde(default)]
    pub betas_1d: Option<Vec<i64>>,
    #[serde(default)]
    pub labels: BTreeMap<String, Vec<i64>>,
    #[serde(default)]
    pub label_vectors: BTreeMap<String, String>,
    #[serde(default)]
    pub betas: Option<Vec<Vec<i64>>>,
    #[serde(default)]
    pub betas_up_to_sign: Option<Vec<Vec<i64>>>,
    #[serde(default)]
    pub torsion: Option<Vec<i64>>,
    #[serde(default)]
    pub lattice_points: Option<Vec<String>>,
    #[serde(default)]
    pub invalid_paths: Vec<PathFixture>,
    #[serde(default)]
    pub path_census: Vec<CensusFixture>,
    pub displays: Vec<DisplayFixture>,
    #[serde(default)]
    pub spliced: Option<SplicedFixture>,
    /// Complete inventory of incredulous sets.
    #[serde(default)]
    pub incredulous_sets: Option<Vec<Vec<String>>>,
    #[serde(default)]
    pub incredulous_contains: Vec<Vec<String>>,
    #[serde(default)]
    pub non_incredulous_sets: Vec<Vec<String>>,
    #[serde(default)]
    pub chamber_classes: Option<usize>,
    #[serde(default)]
    pub classification: Option<ClassificationFixture>,
}

/// Splits `"A1^2 + A0"` into `[("A1", 2), ("A0", 1)]`.
pub fn parse_terms(s: &str) -> Result<Vec<(String, u64)>> {
    s.split('+')
        .map(|t| {
            let t = t.trim();
            let (label, mult) = match t.split_once('^') {
                Some((l, m)) => {
                    let m: u64 = m.trim().parse().map_err(|_| Error::Fixture(format!("bad multiplicity in {t:?}")))?;
                    (l.trim(), m)
                }
                None => (t, 1),
            };
            if label.is_empty() || mult == 0 {
                return Err(Error::Fixture(format!("bad term {t:?}")));
            }
            Ok((label.to_string(), mult))
        })
        .collect()
}

/// Multisets of points indexed by degree, degree 0 first.
pub type Degrees = Vec<BTreeMap<LatticePoint, u64>>;
type DegreeTable = BTreeMap<LatticePoint, Degrees>;

fn profile_degrees(k: &ComplexProfile) -> Degrees {
    (0..=k.length()).map(|d| k.degree(d).cloned().unwrap_or_default()).collect()
}

enum Model {
    Cone(Box<ConeModel>),
    Beta(BetaModel),
}

impl Model {
    fn paths(&self) -> &dyn PathModel {
        match self {
            Model::Cone(m) => m.as_ref(),
            Model::Beta(m) => m,
        }
    }
}

/// A fixture bound to its model, with labels resolved.
pub struct Example {
    pub id: ExampleId,
    pub fixture: Fixture,
    model: Model,
    labels: BTreeMap<String, LatticePoint>,
    analysis: Analysis,
}

impl Example {
    pub fn load(id: ExampleId) -> Result<Self> {
        let fixture = id.fixture()?;
        let model = match (&fixture.rays, &fixture.betas_1d) {
            (Some(rays), None) => {
                let mut spec = ConeSpec::new(rays.clone()).named(id.name());
                if let Some(cb) = &fixture.class_basis {
                    spec = spec.with_class_basis(cb.clone());
                }
                Model::Cone(Box::new(ConeModel::new(spec.validate()?)?))
            }
            (None, Some(b)) => Model::Beta(BetaModel::new(b.clone())?),
            _ => return Err(Error::Fixture(format!("{id}: give exactly one of rays and betas_1d"))),
        };
        let mut labels: BTreeMap<String, LatticePoint> =
            fixture.labels.iter().map(|(k, v)| (k.clone(), LatticePoint(v.clone()))).collect();
        for (label, v) in &fixture.label_vectors {
            let Model::Cone(m) = &model else {
                return Err(Error::Fixture(format!("{id}: label vectors need rays")));
            };
            let v = RationalVector::parse(v).ok_or_else(|| Error::Fixture(format!("bad vector {v:?}")))?;
            let d = m.cone().ceil_divisor(&v)?;
            labels.insert(label.clone(), m.class_group().point_of(&d)?);
        }
        let analysis = Analysis::build(model.paths())?;
        Ok(Example { id, fixture, model, labels, analysis })
    }

    pub fn analysis(&self) -> &Analysis {
        &self.analysis
    }

    pub fn point(&self, label: &str) -> Result<LatticePoint> {
        if let Some(p) = self.labels.get(label) {
            return Ok(p.clone());
        }
        if self.labels.is_empty() {
            if let Some(k) = label.strip_prefix('A').and_then(|k| k.parse::<i64>().ok()) {
                return Ok(LatticePoint(vec![k]));
            }
        }
        Err(Error::Fixture(format!("{}: unknown label {label:?}", self.id)))
    }

    fn points(&self, labels: &[String]) -> Result<Vec<LatticePoint>> {
        labels.iter().map(|l| self.point(l)).collect()
    }

    pub fn label(&self, p: &LatticePoint) -> String {
        match self.labels.iter().find(|(_, q)| *q == p) {
            Some((l, _)) => l.clone(),
            None if p.dim() == 1 => format!("A{}", p.0[0]),
            None => p.to_string(),
        }
    }

    /// Parses a transcribed complex into per-degree multisets.
    pub fn degrees_of(&self, d: &DisplayFixture) -> Result<Degrees> {
        let mut out: Degrees = vec![BTreeMap::new(); d.terms.len()];
        for (i, term) in d.terms.iter().enumerate() {
            let degree = d.terms.len() - 1 - i;
            for (label, m) in parse_terms(term)? {
                *out[degree].entry(self.point(&label)?).or_insert(0) += m;
            }
        }
        Ok(out)
    }

    pub fn render(&self, degrees: &Degrees) -> String {
        degrees
            .iter()
            .rev()
            .map(|terms| {
                let mut parts: Vec<(String, u64)> = terms.iter().map(|(q, &m)| (self.label(q), m)).collect();
                parts.sort();
                parts
                    .into_iter()
                    .map(|(l, m)| if m == 1 { l } else { format!("{l}^{m}") })
                    .collect::<Vec<_>>()
                    .join(" + ")
            })
            .collect::<Vec<_>>()
            .join(" -> ")
    }

    /// Subset counts by `(beta sum, path length)`.
    fn path_counts(&self) -> Result<BTreeMap<(LatticePoint, usize), usize>> {
        Ok(path_census(self.model.paths())?.into_iter().map(|r| ((r.sum, r.length), r.count)).collect())
    }

    /// Failures of the checks on a single complex that need no profile computation. Raw
    /// complexes are also bounded by the number of subsets with the right sum and length.
    pub fn display_issues(&self, point: &LatticePoint, degrees: &Degrees, raw: bool) -> Result<Vec<String>> {
        let mut issues = Vec::new();
        let unit = BTreeMap::from([(point.clone(), 1u64)]);
        if degrees.first() != Some(&unit) {
            issues.push(format!("degree 0 is not {}", self.label(point)));
        }
        let euler: i128 = degrees
            .iter()
            .enumerate()
            .map(|(d, t)| {
                let total: i128 = t.values().map(|&m| m as i128).sum();
                if d % 2 == 0 {
                    total
                } else {
                    -total
                }
            })
            .sum();
        if euler != 0 {
            issues.push(format!("alternating multiplicity sum is {euler}"));
        }
        if !raw {
            return Ok(issues);
        }
        let counts = self.path_counts()?;
        for (d, terms) in degrees.iter().enumerate().skip(1) {
            for (q, &m) in terms {
                let avail = counts.get(&(point.checked_sub(q)?, d)).copied().unwrap_or(0);
                if (avail as u64) < m {
                    issues.push(format!(
                        "{}^{m} in degree {d}, but only {avail} subsets of length {d} lead from {} to {}",
                        self.label(q),
                        self.label(q),
                        self.label(point)
                    ));
                }
            }
        }
        Ok(issues)
    }

    /// Violations of `mult(-R, l, K_P) = mult(-P, l, K_R)` between `K_P` and the other raw complexes.
    pub fn symmetry_issues(&self, point: &LatticePoint, all: &BTreeMap<LatticePoint, Degrees>) -> Result<Vec<String>> {
        let mult = |k: &Degrees, d: usize, q: &LatticePoint| k.get(d).and_then(|t| t.get(q)).copied().unwrap_or(0);
        let mut issues = Vec::new();
        let Some(kp) = all.get(point) else { return Ok(issues) };
        for (r, kr) in all {
            for d in 1..kp.len().max(kr.len()) {
                let a = mult(kp, d, &r.neg());
                let b = mult(kr, d, &point.neg());
                if a != b {
                    issues.push(format!(
                        "{} has {} in degree {d} {a} times, but {} has {} there {b} times",
                        self.label(point),
                        self.label(&r.neg()),
                        self.label(r),
                        self.label(&point.neg())
                    ));
                }
            }
        }
        Ok(issues)
    }

    fn compare_display(
        &self,
        name: String,
        d: &DisplayFixture,
        computed: &ComplexProfile,
        raw: Option<(&DegreeTable, &DegreeTable)>,
    ) -> Result<CheckResult> {
        let point = self.point(&d.point)?;
        let shown = self.degrees_of(d)?;
        let actual = profile_degrees(computed);
        if shown == actual {
            return Ok(CheckResult::matched(name));
        }
        let mut shown_issues = self.display_issues(&point, &shown, raw.is_some())?;
        let mut actual_issues = self.display_issues(&point, &actual, raw.is_some())?;
        if let Some((shown_all, actual_all)) = raw {
            shown_issues.extend(self.symmetry_issues(&point, shown_all)?);
            actual_issues.extend(self.symmetry_issues(&point, actual_all)?);
        }
        let mut notes = vec![format!("transcribed: {}", self.render(&shown)), format!("computed: {}", self.render(&actual))];
        let status = if !shown_issues.is_empty() && actual_issues.is_empty() {
            Status::DisplayInconsistent
        } else {
            Status::Mismatch
        };
        notes.extend(shown_issues.into_iter().map(|i| format!("transcription: {i}")));
        notes.extend(actual_issues.into_iter().map(|i| format!("computation: {i}")));
        Ok(CheckResult { name, status, notes })
    }

    fn check_betas(&self) -> Option<CheckResult> {
        let computed: Vec<Vec<i64>> = self.model.paths().betas().into_iter().map(|b| b.0).collect();
        let (expected, up_to_sign) = match (&self.fixture.betas, &self.fixture.betas_up_to_sign) {
            (Some(b), _) => (b, false),
            (None, Some(b)) => (b, true),
            (None, None) => return None,
        };
        let flipped: Vec<Vec<i64>> = expected.iter().map(|b| b.iter().map(|x| -x).collect()).collect();
        let ok = computed == *expected || (up_to_sign && computed == flipped);
        Some(CheckResult::compare("betas", ok, format!("expected {expected:?}, computed {computed:?}")))
    }

    fn check_torsion(&self) -> Option<CheckResult> {
        let expected = self.fixture.torsion.as_ref()?;
        let Model::Cone(m) = &self.model else {
            return Some(CheckResult::compare("torsion", false, "torsion needs rays".into()));
        };
        let computed = m.class_group().torsion().to_vec();
        Some(CheckResult::compare(
            "torsion",
            &computed == expected,
            format!("expected {expected:?}, computed {computed:?}"),
        ))
    }

    fn check_lattice_points(&self) -> Result<Option<CheckResult>> {
        let Some(labels) = &self.fixture.lattice_points else { return Ok(None) };
        let expected: BTreeSet<LatticePoint> = self.points(labels)?.into_iter().collect();
        let computed: BTreeSet<LatticePoint> = self.analysis.points().iter().cloned().collect();
        let fmt = |s: &BTreeSet<LatticePoint>| s.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ");
        Ok(Some(CheckResult::compare(
            "lattice points",
            expected == computed,
            format!("expected {}, computed {}", fmt(&expected), fmt(&computed)),
        )))
    }

    fn check_invalid_paths(&self) -> Result<Vec<CheckResult>> {
        let betas = self.model.paths().betas();
        let mut out = Vec::new();
        for p in &self.fixture.invalid_paths {
            let name = format!("invalid path {} -> {} along {:?}", p.from, p.to, p.ray_numbers);
            let from = self.point(&p.from)?;
            let to = self.point(&p.to)?;
            let idx = ray_indices(&p.ray_numbers, betas.len())?;
            let mut sum = LatticePoint::origin(from.dim());
            for &r in &idx {
                sum = sum.checked_add(&betas[r])?;
            }
            if from.checked_add(&sum)? != to {
                out.push(CheckResult {
                    name,
                    status: Status::DisplayInconsistent,
                    notes: vec![format!("{} plus the betas is {}, not {}", p.from, from.checked_add(&sum)?, p.to)],
                });
                continue;
            }
            let valid = self.model.paths().valid_paths_into(&to)?.iter().any(|q| q.subset == idx);
            out.push(CheckResult::compare(&name, !valid, "path is valid".into()));
        }
        Ok(out)
    }

    fn check_census(&self) -> Result<Option<CheckResult>> {
        if self.fixture.path_census.is_empty() {
            return Ok(None);
        }
        let betas = self.model.paths().betas();
        let k = betas.len();
        let computed = self.path_counts()?;
        let mut seen = BTreeSet::new();
        let mut notes = Vec::new();
        let mut self_inconsistent = false;
        let mut disagree = false;
        for row in &self.fixture.path_census {
            let key = (LatticePoint(row.sum.clone()), row.length);
            seen.insert(key.clone());
            let idx = ray_indices(&row.ray_numbers, k)?;
            let mut sum = LatticePoint::origin(key.0.dim());
            for &r in &idx {
                sum = sum.checked_add(&betas[r])?;
            }
            if sum != key.0 {
                self_inconsistent = true;
                notes.push(format!("row {} length {}: example {:?} sums to {sum}", key.0, row.length, row.ray_numbers));
            }
            match computed.get(&key) {
                Some(&c) if c == row.count => {}
                c => {
                    disagree = true;
                    notes.push(format!(
                        "row {} length {}: expected {}, computed {}",
                        key.0,
                        row.length,
                        row.count,
                        c.copied().unwrap_or(0)
                    ));
                }
            }
        }
        for ((s, l), c) in &computed {
            if !seen.contains(&(s.clone(), *l)) {
                disagree = true;
                notes.push(format!("computed row {s} length {l} count {c} is not transcribed"));
            }
        }
        let total: usize = self.fixture.path_census.iter().map(|r| r.count).sum();
        if total != 1 << k {
            self_inconsistent = true;
            notes.push(format!("transcribed counts total {total}, but there are {} subsets", 1u64 << k));
        }
        let status = match (disagree, self_inconsistent) {
            (false, false) => Status::Match,
            (false, true) | (true, true) => Status::DisplayInconsistent,
            (true, false) => Status::Mismatch,
        };
        Ok(Some(CheckResult { name: "path census".into(), status, notes }))
    }

    fn check_raw(&self) -> Result<Vec<CheckResult>> {
        let mut shown = BTreeMap::new();
        let mut actual = BTreeMap::new();
        for d in &self.fixture.displays {
            let p = self.point(&d.point)?;
            actual.insert(p.clone(), profile_degrees(self.analysis.profile(&p)?));
            shown.insert(p, self.degrees_of(d)?);
        }
        self.fixture
            .displays
            .iter()
            .map(|d| {
                let p = self.point(&d.point)?;
                let name = format!("raw complex {}", d.point);
                self.compare_display(name, d, self.analysis.profile(&p)?, Some((&shown, &actual)))
            })
            .collect()
    }

    fn check_spliced(&self) -> Result<Vec<CheckResult>> {
        let Some(sp) = &self.fixture.spliced else { return Ok(Vec::new()) };
        let set = self.points(&sp.set)?;
        let report = self.analysis.check_incredulous(&set)?;
        let name = format!("incredulous {{{}}}", sp.set.join(", "));
        let mut out = vec![CheckResult::compare(
            &name,
            report.incredulous,
            format!("lockable {}, incredulous {}", report.lockable, report.incredulous),
        )];
        let Some(finals) = &report.final_profiles else { return Ok(out) };
        for d in &sp.displays {
            let p = self.point(&d.point)?;
            let computed = finals.get(&p).ok_or_else(|| Error::Fixture(format!("{} is not in the set", d.point)))?;
            out.push(self.compare_display(format!("spliced complex {}", d.point), d, computed, None)?);
        }
        Ok(out)
    }

    fn check_inventory(&self) -> Result<Vec<CheckResult>> {
        let mut out = Vec::new();
        let needs_search = self.fixture.incredulous_sets.is_some() || !self.fixture.incredulous_contains.is_empty();
        if needs_search {
            let found: BTreeSet<BTreeSet<LatticePoint>> = find_incredulous(&self.analysis, &SearchConfig::default())?
                .incredulous_sets
                .into_iter()
                .map(|s| s.into_iter().collect())
                .collect();
            let render = |s: &BTreeSet<LatticePoint>| {
                format!("{{{}}}", s.iter().map(|p| self.label(p)).collect::<Vec<_>>().join(", "))
            };
            let found_text = found.iter().map(render).collect::<Vec<_>>().join(" ");
            if let Some(sets) = &self.fixture.incredulous_sets {
                let expected = sets
                    .iter()
                    .map(|s| Ok(self.points(s)?.into_iter().collect()))
                    .collect::<Result<BTreeSet<BTreeSet<LatticePoint>>>>()?;
                out.push(CheckResult::compare(
                    "incredulous inventory",
                    expected == found,
                    format!("computed: {found_text}"),
                ));
            }
            for s in &self.fixture.incredulous_contains {
                let set: BTreeSet<LatticePoint> = self.points(s)?.into_iter().collect();
                out.push(CheckResult::compare(
                    &format!("search finds {{{}}}", s.join(", ")),
                    found.contains(&set),
                    format!("computed: {found_text}"),
                ));
            }
        }
        for s in &self.fixture.non_incredulous_sets {
            let r = self.analysis.check_incredulous(&self.points(s)?)?;
            out.push(CheckResult::compare(
                &format!("not incredulous {{{}}}", s.join(", ")),
                r.lockable && !r.incredulous,
                format!("lockable {}, incredulous {}", r.lockable, r.incredulous),
            ));
        }
        Ok(out)
    }

    fn classification(&self) -> Result<Classification> {
        let mode = match &self.model {
            Model::Cone(m) => beta_mode(m.class_group())?,
            Model::Beta(m) => BetaMode::System(BetaSystem::new(m.betas().to_vec())?),
        };
        Ok(classify(&mode))
    }

    fn check_classification(&self) -> Result<Option<CheckResult>> {
        let Some(expected) = &self.fixture.classification else { return Ok(None) };
        let c = self.classification()?;
        Ok(Some(CheckResult::compare(
            "classification",
            c.verdict == expected.verdict && c.witness == expected.witness,
            format!("computed {:?} with witness {:?} ({})", c.verdict, c.witness, c.reason),
        )))
    }

    fn check_chambers(&self) -> Result<Option<CheckResult>> {
        let Some(expected) = self.fixture.chamber_classes else { return Ok(None) };
        let Model::Cone(m) = &self.model else {
            return Err(Error::Fixture("chamber counts need rays".into()));
        };
        let census = enumerate_chambers(m.cone(), &GridSpec::default_for(m.cone())?)?;
        Ok(Some(CheckResult::compare(
            "chamber classes",
            census.classes == expected,
            format!(
                "expected {expected}, computed {} at denominator {}",
                census.classes, census.denominator
            ),
        )))
    }

    pub fn verify(&self) -> Result<VerifyReport> {
        let mut checks = Vec::new();
        checks.extend(self.check_betas());
        checks.extend(self.check_torsion());
        checks.extend(self.check_lattice_points()?);
        checks.extend(self.check_invalid_paths()?);
        checks.extend(self.check_census()?);
        checks.extend(self.check_raw()?);
        checks.extend(self.check_spliced()?);
        checks.extend(self.check_inventory()?);
        checks.extend(self.check_classification()?);
        checks.extend(self.check_chambers()?);
        Ok(VerifyReport { example: self.id, anchor: self.fixture.anchor.clone(), checks })
    }
}

fn ray_indices(numbers: &[usize], k: usize) -> Result<Vec<usize>> {
    let mut idx = numbers
        .iter()
        .map(|&r| {
            if r == 0 || r > k {
                Err(Error::Fixture(format!("ray number {r} out of range 1..={k}")))
            } else {
                Ok(r - 1)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    idx.sort_unstable();
    idx.dedup();
    Ok(idx)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Match,
    /// The transcription fails a self-check that the computed profile passes.
    DisplayInconsistent,
    Mismatch,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl CheckResult {
    fn matched(name: String) -> Self {
        CheckResult { name, status: Status::Match, notes: Vec::new() }
    }

    fn compare(name: &str, ok: bool, detail: String) -> Self {
        if ok {
            CheckResult::matched(name.into())
        } else {
            CheckResult { name: name.into(), status: Status::Mismatch, notes: vec![detail] }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub example: ExampleId,
    pub anchor: String,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    pub fn all_match(&self) -> bool {
        self.count(Status::Match) == self.checks.len()
    }

    pub fn failing(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| c.status != Status::Match)
    }
}

pub fn verify(id: ExampleId) -> Result<VerifyReport> {
    Example::load(id)?.verify()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_parse() {
        for id in ExampleId::ALL {
            let f = id.fixture().unwrap();
            assert_eq!(f.example, id.name());
            assert_eq!(id.name().parse::<ExampleId>().unwrap(), id);
        }
        assert!("k5".parse::<ExampleId>().is_err());
    }

    #[test]
    fn term_parsing() {
        assert_eq!(parse_terms("A1^2 + A-1").unwrap(), vec![("A1".into(), 2), ("A-1".into(), 1)]);
        assert!(parse_terms("A1^0").is_err());
        assert!(parse_terms("A1 + ").is_err());
    }

    #[test]
    fn fms710_matches() {
        let r = verify(ExampleId::Fms710).unwrap();
        assert!(r.all_match(), "{r:#?}");
    }

    #[test]
    fn self_checks_catch_bad_displays() {
        let ex = Example::load(ExampleId::Fms710).unwrap();
        let p = ex.point("A1").unwrap();
        let bad = DisplayFixture { point: "A1".into(), terms: vec!["A2".into(), "A0^3".into(), "A1".into()] };
        let issues = ex.display_issues(&p, &ex.degrees_of(&bad).unwrap(), true).unwrap();
        assert_eq!(issues.len(), 2, "{issues:?}");
        let good = DisplayFixture { point: "A1".into(), terms: vec!["A2".into(), "A0^2".into(), "A1".into()] };
        assert!(ex.display_issues(&p, &ex.degrees_of(&good).unwrap(), true).unwrap().is_empty());
    }
}
