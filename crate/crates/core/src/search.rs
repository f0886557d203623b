//! Subset search for incredulous sets of lattice points.

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::almost_simplicial::{forced_interval, BetaSystem};
use crate::class_group::LatticePoint;
use crate::complexes::Analysis;
use crate::error::{Error, Result};

/// Subsets are tracked as bitmasks over point indices.
pub const MAX_POINTS: usize = 63;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    #[default]
    Exhaustive,
    FirstFound,
    AllMinimal,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pruning {
    #[default]
    None,
    GorensteinAlmostSimplicial,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub mode: Mode,
    pub pruning: Pruning,
    pub max_subsets: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub incredulous_sets: Vec<Vec<LatticePoint>>,
    pub subsets_examined: u64,
}

/// Degree sets of profiles, with every degree above `n` folded into bit `n + 1`.
pub struct FastChecker {
    n: usize,
    // per point: (successor index, positive degrees where it occurs)
    succ: Vec<Vec<(usize, u64)>>,
}

impl FastChecker {
    pub fn new(analysis: &Analysis) -> Result<Self> {
        let r = analysis.points().len();
        if r > MAX_POINTS {
            return Err(Error::TooManyPoints { points: r, max: MAX_POINTS });
        }
        let n = analysis.dim();
        if n > 30 {
            return Err(Error::Overflow);
        }
        let succ = analysis
            .profiles()
            .iter()
            .map(|k| {
                let mut by_point: Vec<(usize, u64)> = Vec::new();
                for (d, entries) in k.degrees().filter(|(d, _)| *d > 0) {
                    for q in entries.keys() {
                        let qi = analysis.index_of(q).expect("profile entries are lattice points");
                        let bit = 1u64 << d.min(n + 1);
                        match by_point.iter_mut().find(|(i, _)| *i == qi) {
                            Some(slot) => slot.1 |= bit,
                            None => by_point.push((qi, bit)),
                        }
                    }
                }
                by_point.sort_unstable();
                by_point
            })
            .collect();
        Ok(FastChecker { n, succ })
    }

    fn cap(&self, mask: u64) -> u64 {
        let keep = (1u64 << (self.n + 2)) - 1;
        let over = mask & !keep != 0 || mask & (1 << (self.n + 1)) != 0;
        (mask & keep) | if over { 1 << (self.n + 1) } else { 0 }
    }

    /// Degrees reached by substituting a complex with degree set `inner` at each degree of `at`.
    fn spread(&self, at: u64, inner: u64) -> u64 {
        let positive = inner & !1;
        let mut out = 0u64;
        let mut a = at;
        while a != 0 {
            let d = a.trailing_zeros();
            a &= a - 1;
            // degree e of the inner complex lands at d + e - 1
            out |= self.cap(positive << (d - 1));
        }
        self.cap(out)
    }

    /// `None` when `set` is not lockable; otherwise whether every spliced profile has length `n`.
    pub fn check(&self, set: u64) -> Option<bool> {
        let r = self.succ.len();
        // 0 unvisited, 1 on stack, 2 done
        let mut state = vec![0u8; r];
        let mut fin = vec![0u64; r];
        let mut full = true;
        for q in (0..r).filter(|&q| set >> q & 1 == 1) {
            let mut mask = 1u64;
            for &(t, dm) in &self.succ[q] {
                if set >> t & 1 == 1 {
                    mask |= dm;
                } else {
                    let ft = self.excluded(t, set, &mut state, &mut fin)?;
                    mask |= self.spread(dm, ft);
                }
            }
            full &= 63 - mask.leading_zeros() as usize == self.n;
        }
        Some(full)
    }

    fn excluded(&self, t: usize, set: u64, state: &mut [u8], fin: &mut [u64]) -> Option<u64> {
        match state[t] {
            2 => return Some(fin[t]),
            1 => return None,
            _ => {}
        }
        state[t] = 1;
        let mut mask = 1u64;
        for &(s, dm) in &self.succ[t] {
            if set >> s & 1 == 1 {
                mask |= dm;
            } else {
                let fs = self.excluded(s, set, state, fin)?;
                mask |= self.spread(dm, fs);
            }
        }
        state[t] = 2;
        fin[t] = mask;
        Some(mask)
    }
}

fn mask_of(idx: &[usize]) -> u64 {
    idx.iter().fold(0u64, |m, &i| m | 1 << i)
}

/// Indices that every incredulous set must contain under the Gorenstein almost-simplicial lemmas;
/// `None` if one of them is not a lattice point, so no set qualifies.
fn required_points(analysis: &Analysis) -> Result<Option<Vec<usize>>> {
    let betas = analysis.almost_simplicial_betas().ok_or(Error::PruningNotApplicable)?;
    let bs = BetaSystem::new(betas.to_vec()).map_err(|_| Error::PruningNotApplicable)?;
    let mut req: Vec<i64> = forced_interval(&bs).points();
    if !req.contains(&0) {
        req.push(0);
    }
    let mut idx = Vec::new();
    for x in req {
        match analysis.index_of(&LatticePoint(vec![x])) {
            Ok(i) => idx.push(i),
            Err(_) => return Ok(None),
        }
    }
    idx.sort_unstable();
    Ok(Some(idx))
}

pub fn find_incredulous(analysis: &Analysis, cfg: &SearchConfig) -> Result<SearchOutcome> {
    if cfg.max_subsets == Some(0) {
        return Err(Error::InvalidConfig("subset cap must be positive".into()));
    }
    let checker = FastChecker::new(analysis)?;
    let r = analysis.points().len();
    let required = match cfg.pruning {
        Pruning::None => Vec::new(),
        Pruning::GorensteinAlmostSimplicial => match required_points(analysis)? {
            Some(req) => req,
            None => return Ok(SearchOutcome { incredulous_sets: Vec::new(), subsets_examined: 0 }),
        },
    };
    let base = mask_of(&required);
    let free: Vec<usize> = (0..r).filter(|i| !required.contains(i)).collect();

    let mut found: Vec<u64> = Vec::new();
    let mut examined = 0u64;
    for extra in 0..=free.len() {
        if required.len() + extra == 0 {
            continue;
        }
        let level: Vec<u64> = free.iter().copied().combinations(extra).map(|c| base | mask_of(&c)).collect();
        let level: Vec<u64> = match cfg.mode {
            Mode::AllMinimal => {
                level.into_iter().filter(|&m| found.iter().all(|&f| f & !m != 0)).collect()
            }
            _ => level,
        };
        if let Some(cap) = cfg.max_subsets {
            if examined + level.len() as u64 > cap {
                return Err(Error::CapExceeded { examined });
            }
        }
        examined += level.len() as u64;
        let hits: Vec<u64> = level.into_par_iter().filter(|&m| checker.check(m) == Some(true)).collect();
        found.extend(hits.iter().copied());
        if cfg.mode == Mode::FirstFound && !hits.is_empty() {
            break;
        }
    }

    let mut sets: Vec<Vec<usize>> = found
        .into_iter()
        .map(|m| (0..r).filter(|&i| m >> i & 1 == 1).collect())
        .collect();
    sets.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    if cfg.mode == Mode::FirstFound {
        sets.truncate(1);
    }
    let points = analysis.points();
    Ok(SearchOutcome {
        incredulous_sets: sets.into_iter().map(|s| s.into_iter().map(|i| points[i].clone()).collect()).collect(),
        subsets_examined: examined,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paths::BetaModel;

    fn analysis(b: &[i64]) -> Analysis {
        Analysis::build(&BetaModel::new(b.to_vec()).unwrap()).unwrap()
    }

    fn pts(sets: &[&[i64]]) -> Vec<Vec<LatticePoint>> {
        sets.iter().map(|s| s.iter().map(|&x| LatticePoint(vec![x])).collect()).collect()
    }

    #[test]
    fn fms710_inventory() {
        let a = analysis(&[1, -1, 1, -1]);
        let out = find_incredulous(&a, &SearchConfig::default()).unwrap();
        assert_eq!(out.incredulous_sets, pts(&[&[-1, 0], &[0, 1]]));
        assert_eq!(out.subsets_examined, 7);
        let first = find_incredulous(&a, &SearchConfig { mode: Mode::FirstFound, ..Default::default() }).unwrap();
        assert_eq!(first.incredulous_sets, pts(&[&[-1, 0]]));
    }

    #[test]
    fn fast_check_agrees_with_splicing() {
        for b in [&[1, -1, 1, -1][..], &[2, 1, -1, -1, -1], &[2, 1, 1, -2, -2], &[1, 1, 1, -1, -1, -1]] {
            let a = analysis(b);
            let fast = FastChecker::new(&a).unwrap();
            let r = a.points().len();
            for m in 1u64..(1 << r) {
                let set: Vec<LatticePoint> =
                    (0..r).filter(|&i| m >> i & 1 == 1).map(|i| a.points()[i].clone()).collect();
                let slow = a.check_incredulous(&set).unwrap();
                let expected = slow.lockable.then_some(slow.incredulous);
                assert_eq!(fast.check(m), expected, "betas {b:?} set {set:?}");
            }
        }
    }

    #[test]
    fn modes_and_pruning() {
        let a = analysis(&[2, 1, -1, -1, -1]);
        let all = find_incredulous(&a, &SearchConfig::default()).unwrap();
        assert!(all.incredulous_sets.contains(&pts(&[&[-1, 0, 1]])[0]));
        let pruned = find_incredulous(
            &a,
            &SearchConfig { pruning: Pruning::GorensteinAlmostSimplicial, ..Default::default() },
        )
        .unwrap();
        assert_eq!(pruned.incredulous_sets, all.incredulous_sets);
        assert!(pruned.subsets_examined < all.subsets_examined);
        let minimal = find_incredulous(&a, &SearchConfig { mode: Mode::AllMinimal, ..Default::default() }).unwrap();
        for s in &all.incredulous_sets {
            assert!(minimal.incredulous_sets.iter().any(|m| m.iter().all(|p| s.contains(p))));
        }
    }

    #[test]
    fn no_nccr_lists_are_empty() {
        for b in [&[2, 1, 1, -2, -2][..], &[2, 2, 2, -3, -3], &[2, 2, -1, -1, -1, -1]] {
            let out = find_incredulous(&analysis(b), &SearchConfig::default()).unwrap();
            assert!(out.incredulous_sets.is_empty(), "{b:?}");
        }
    }

    #[test]
    fn cap_and_config_errors() {
        let a = analysis(&[2, 1, 1, -2, -2]);
        let cfg = SearchConfig { max_subsets: Some(10), ..Default::default() };
        assert!(matches!(find_incredulous(&a, &cfg), Err(Error::CapExceeded { .. })));
        let cfg = SearchConfig { max_subsets: Some(0), ..Default::default() };
        assert!(matches!(find_incredulous(&a, &cfg), Err(Error::InvalidConfig(_))));
    }
}
