//! Sparse `(degree, bidegree) -> rank` tables over a closed degree window.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Ranks indexed by cohomological degree `r` and bidegree `b0`.
///
/// Zero ranks are never stored, so two profiles over the same window are
/// equal exactly when they agree on every cell.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "ProfileJson", try_from = "ProfileJson")]
pub struct BigradedProfile {
    r_min: i64,
    r_max: i64,
    cells: BTreeMap<(i64, i64), u64>,
}

/// One cell where two profiles disagree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellDiff {
    pub degree: i64,
    pub bidegree: i64,
    pub left: u64,
    pub right: u64,
}

impl BigradedProfile {
    /// Empty profile over `[r_min, r_max]`.
    ///
    /// # Panics
    /// If `r_min > r_max`.
    pub fn new(r_min: i64, r_max: i64) -> Self {
        assert!(r_min <= r_max, "empty degree window [{r_min}, {r_max}]");
        BigradedProfile { r_min, r_max, cells: BTreeMap::new() }
    }

    pub fn window(&self) -> (i64, i64) {
        (self.r_min, self.r_max)
    }

    pub fn contains_degree(&self, r: i64) -> bool {
        self.r_min <= r && r <= self.r_max
    }

    /// Add `mult` to the cell `(r, b0)`.
    ///
    /// # Panics
    /// If `r` lies outside the window.
    pub fn add(&mut self, r: i64, b0: i64, mult: u64) {
        assert!(self.contains_degree(r), "degree {r} outside window");
        if mult > 0 {
            *self.cells.entry((r, b0)).or_insert(0) += mult;
        }
    }

    pub fn get(&self, r: i64, b0: i64) -> u64 {
        self.cells.get(&(r, b0)).copied().unwrap_or(0)
    }

    pub fn rank(&self, r: i64) -> u64 {
        self.bidegrees(r).map(|(_, v)| v).sum()
    }

    /// `(b0, rank)` pairs at degree `r`, ascending in `b0`.
    pub fn bidegrees(&self, r: i64) -> impl Iterator<Item = (i64, u64)> + '_ {
        self.cells.range((r, i64::MIN)..=(r, i64::MAX)).map(|(&(_, b), &v)| (b, v))
    }

    pub fn min_bidegree(&self, r: i64) -> Option<i64> {
        self.bidegrees(r).next().map(|(b, _)| b)
    }

    /// Lexicographically sorted `(degree, bidegree, rank)` triples.
    pub fn triples(&self) -> Vec<(i64, i64, u64)> {
        self.cells.iter().map(|(&(r, b), &v)| (r, b, v)).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Sum of two profiles; the window becomes the hull of both windows.
    pub fn merge(mut self, other: &BigradedProfile) -> BigradedProfile {
        self.r_min = self.r_min.min(other.r_min);
        self.r_max = self.r_max.max(other.r_max);
        for (&key, &v) in &other.cells {
            *self.cells.entry(key).or_insert(0) += v;
        }
        self
    }

    /// The cells with degree in `[r_min, r_max]`.
    pub fn restrict(&self, r_min: i64, r_max: i64) -> BigradedProfile {
        let mut out = BigradedProfile::new(r_min, r_max);
        for (&(r, b), &v) in &self.cells {
            if out.contains_degree(r) {
                out.add(r, b, v);
            }
        }
        out
    }

    /// Cells where `self` and `other` differ, sorted.
    pub fn diff(&self, other: &BigradedProfile) -> Vec<CellDiff> {
        let keys: std::collections::BTreeSet<_> =
            self.cells.keys().chain(other.cells.keys()).copied().collect();
        keys.into_iter()
            .filter_map(|(r, b)| {
                let (l, rr) = (self.get(r, b), other.get(r, b));
                (l != rr).then_some(CellDiff { degree: r, bidegree: b, left: l, right: rr })
            })
            .collect()
    }
}

#[derive(Serialize, Deserialize)]
struct ProfileJson {
    window: [i64; 2],
    triples: Vec<[i64; 3]>,
}

impl From<BigradedProfile> for ProfileJson {
    fn from(p: BigradedProfile) -> Self {
        ProfileJson {
            window: [p.r_min, p.r_max],
            triples: p.triples().into_iter().map(|(r, b, v)| [r, b, v as i64]).collect(),
        }
    }
}

impl TryFrom<ProfileJson> for BigradedProfile {
    type Error = String;

    fn try_from(j: ProfileJson) -> Result<Self, Self::Error> {
        let [lo, hi] = j.window;
        if lo > hi {
            return Err(format!("empty window [{lo}, {hi}]"));
        }
        let mut p = BigradedProfile::new(lo, hi);
        for [r, b, v] in j.triples {
            if !p.contains_degree(r) || v < 0 {
                return Err(format!("bad triple ({r}, {b}, {v})"));
            }
            p.add(r, b, v as u64);
        }
        Ok(p)
    }
}
