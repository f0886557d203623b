//! Rank-one beta lists of almost-simplicial Gorenstein cones and their closed-form verdict.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::class_group::{ClassGroupData, LatticePoint};
use crate::cone::Cone;
use crate::error::{Error, Result};

/// Nonzero betas sorted descending, summing to zero, with at least two of each sign.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "BetaInput", into = "BetaInput")]
pub struct BetaSystem {
    betas: Vec<i64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct BetaInput {
    betas: Vec<i64>,
}

impl TryFrom<BetaInput> for BetaSystem {
    type Error = Error;

    fn try_from(input: BetaInput) -> Result<Self> {
        BetaSystem::new(input.betas)
    }
}

impl From<BetaSystem> for BetaInput {
    fn from(bs: BetaSystem) -> Self {
        BetaInput { betas: bs.betas }
    }
}

impl BetaSystem {
    pub fn new(mut betas: Vec<i64>) -> Result<Self> {
        if betas.contains(&0) {
            return Err(Error::ZeroBetaUnsupported);
        }
        if betas.len() > crate::cone::MAX_RAYS {
            return Err(Error::InvalidBetas(format!("{} entries", betas.len())));
        }
        if betas.iter().map(|&b| b as i128).sum::<i128>() != 0 {
            return Err(Error::InvalidBetas("entries must sum to zero".into()));
        }
        let pos = betas.iter().filter(|&&b| b > 0).count();
        let neg = betas.len() - pos;
        if pos < 2 || neg < 2 {
            return Err(Error::InvalidBetas(format!(
                "need at least two entries of each sign, got {pos} positive and {neg} negative"
            )));
        }
        betas.sort_unstable_by(|a, b| b.cmp(a));
        Ok(BetaSystem { betas })
    }

    pub fn betas(&self) -> &[i64] {
        &self.betas
    }

    /// Cone dimension: one less than the number of rays.
    pub fn n(&self) -> usize {
        self.betas.len() - 1
    }

    pub fn positives(&self) -> usize {
        self.betas.iter().filter(|&&b| b > 0).count()
    }

    pub fn gcd(&self) -> i64 {
        self.betas.iter().fold(0i64, |g, &b| g.gcd(&b))
    }

    pub fn flipped(&self) -> BetaSystem {
        let mut betas: Vec<i64> = self.betas.iter().map(|b| -b).collect();
        betas.sort_unstable_by(|a, b| b.cmp(a));
        BetaSystem { betas }
    }
}

/// Open integer interval `(lo, hi)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpenInterval {
    pub lo: i64,
    pub hi: i64,
}

impl OpenInterval {
    pub fn contains(&self, x: i64) -> bool {
        self.lo < x && x < self.hi
    }

    pub fn points(&self) -> Vec<i64> {
        ((self.lo + 1)..self.hi).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BetaMode {
    System(BetaSystem),
    ZeroBetaPresent(Vec<i64>),
}

/// Extracts the one-dimensional betas of a rank-one class group.
pub fn beta_mode(cg: &ClassGroupData) -> Result<BetaMode> {
    if cg.free_rank() != 1 {
        return Err(Error::NotRankOne(cg.free_rank()));
    }
    let betas: Vec<i64> = cg.betas().iter().map(|b| b.0[0]).collect();
    if betas.contains(&0) {
        return Ok(BetaMode::ZeroBetaPresent(betas));
    }
    Ok(BetaMode::System(BetaSystem::new(betas)?))
}

/// Integer points strictly between the forced bounds must lie in every incredulous set.
pub fn forced_interval(bs: &BetaSystem) -> OpenInterval {
    let b = &bs.betas;
    let kp = bs.positives();
    // negatives except the one closest to zero; positives except the smallest
    let lo = b[kp + 1..].iter().sum::<i64>() + 1;
    let hi = b[..kp - 1].iter().sum::<i64>() - 1;
    OpenInterval { lo, hi }
}

/// Points whose raw profile has full length `n`.
pub fn full_length_window(bs: &BetaSystem) -> OpenInterval {
    OpenInterval { lo: -bs.betas[0], hi: -bs.betas[bs.betas.len() - 1] }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    HasNccr,
    NoNccr,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub verdict: Verdict,
    pub witness: Option<Vec<i64>>,
    pub reason: String,
}

impl Classification {
    fn has(witness: Vec<i64>, reason: &str) -> Self {
        Classification { verdict: Verdict::HasNccr, witness: Some(witness), reason: reason.into() }
    }

    fn no(reason: &str) -> Self {
        Classification { verdict: Verdict::NoNccr, witness: None, reason: reason.into() }
    }

    pub fn witness_points(&self) -> Option<Vec<LatticePoint>> {
        self.witness.as_ref().map(|w| w.iter().map(|&x| LatticePoint(vec![x])).collect())
    }
}

const SPECIAL_WITH: [&[i64]; 2] = [&[2, 1, -1, -1, -1], &[1, 1, 1, -1, -1, -1]];
const SPECIAL_WITHOUT: [&[i64]; 3] = [&[2, 1, 1, -2, -2], &[2, 2, 2, -3, -3], &[2, 2, -1, -1, -1, -1]];

fn matches_up_to_flip(bs: &BetaSystem, pattern: &[i64]) -> bool {
    bs.betas == pattern || bs.flipped().betas == pattern
}

/// Betas `(p, q, -q, -p)`.
pub fn trapezoid_pattern(bs: &BetaSystem) -> bool {
    let b = &bs.betas;
    b.len() == 4 && bs.positives() == 2 && b[0] == -b[3] && b[1] == -b[2]
}

/// Gorenstein cone over a lattice quadrilateral with a pair of parallel edges.
pub fn is_lattice_trapezoid(cone: &Cone) -> bool {
    if cone.dim() != 3 || cone.num_rays() != 4 || !cone.is_gorenstein() {
        return false;
    }
    let u = cone.rays();
    let diff = |a: usize, b: usize| [u[a][0] - u[b][0], u[a][1] - u[b][1], u[a][2] - u[b][2]];
    let parallel = |x: [i64; 3], y: [i64; 3]| {
        x[1] * y[2] == x[2] * y[1] && x[2] * y[0] == x[0] * y[2] && x[0] * y[1] == x[1] * y[0]
    };
    // diagonals of a convex quadrilateral cross, so a parallel pair is a pair of opposite edges
    [((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2))]
        .into_iter()
        .any(|((a, b), (c, d))| parallel(diff(a, b), diff(c, d)))
}

/// Both readings of the trapezoid clause; the geometric one needs ray data.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrapezoidReading {
    pub beta_pattern: bool,
    pub lattice_trapezoid: Option<bool>,
}

impl TrapezoidReading {
    pub fn new(mode: &BetaMode, cone: Option<&Cone>) -> Self {
        let beta_pattern = matches!(mode, BetaMode::System(bs) if trapezoid_pattern(bs));
        TrapezoidReading { beta_pattern, lattice_trapezoid: cone.map(is_lattice_trapezoid) }
    }
}

pub fn classify(mode: &BetaMode) -> Classification {
    let bs = match mode {
        BetaMode::ZeroBetaPresent(_) => return Classification::no("zero_beta"),
        BetaMode::System(bs) => bs,
    };
    if SPECIAL_WITH.iter().any(|p| matches_up_to_flip(bs, p)) {
        return Classification::has(vec![-1, 0, 1], "special_case_table");
    }
    if SPECIAL_WITHOUT.iter().any(|p| matches_up_to_flip(bs, p)) {
        return Classification::no("special_case_table");
    }
    let b = &bs.betas;
    if trapezoid_pattern(bs) {
        let witness = if b[0] != b[1] {
            ((b[3] + 1)..b[0]).collect()
        } else {
            ((-b[0] + 1)..=b[0]).collect()
        };
        return Classification::has(witness, "trapezoid");
    }
    Classification::no("general_argument")
}
