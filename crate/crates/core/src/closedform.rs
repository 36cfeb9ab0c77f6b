//! Closed formulas for symplectic cohomology ranks and their bidegree
//! decomposition.
//!
//! Two independent routes are provided for degrees `r <= 1`:
//! explicit contribution sets (each defined by linear inequalities in one
//! integer unknown, solved by exact floor/ceiling division), and four-case
//! piecewise formulas in a residue `q`. Degrees `r >= 2` are constant:
//! nothing in degree 2, the Milnor number at bidegree `-1` in degree 3,
//! nothing above.

use num_integer::Integer;
use serde::Serialize;

use crate::polyspec::{Kind, PolySpec, SpecError};
pub use crate::profile::BigradedProfile;

/// Integers `m` with `lo <= step * m <= hi` (`step > 0`).
fn multiples_in(step: i64, lo: i64, hi: i64) -> std::ops::RangeInclusive<i64> {
    Integer::div_ceil(&lo, &step)..=Integer::div_floor(&hi, &step)
}

/// Modulus of the residue `q`; the rank sequence in even degrees is
/// periodic in `k` with this period.
pub fn residue_modulus(spec: &PolySpec) -> i64 {
    let (p, q) = (spec.p(), spec.q());
    match spec.kind() {
        Kind::Chain => p - 1 + q,
        Kind::Loop => p + q - 2,
        Kind::Fermat => p + q,
    }
}

/// The residue `q` driving the piecewise formulas at level `k`.
pub fn residue_q(spec: &PolySpec, k: i64) -> i64 {
    let (p, q) = (spec.p(), spec.q());
    let mult = match spec.kind() {
        Kind::Chain => p - 1,
        Kind::Loop => (p - 1).min(q - 1),
        Kind::Fermat => p.min(q),
    };
    (mult * (1 - k)).mod_floor(&residue_modulus(spec))
}

/// Contribution sets of a chain or loop polynomial at one level `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MixedSets {
    pub w: Vec<i64>,
    pub x: Vec<i64>,
    pub y: Vec<i64>,
    /// `(i, m3)` pairs; `i` indexes the family.
    pub z: Vec<(i64, i64)>,
    /// Multiplicity carried by each element of `y`.
    pub eta: u64,
}

/// A Fermat contribution: grid indices `(i, j)` and the pair `(m3, m4)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FermatCell {
    pub i: i64,
    pub j: i64,
    pub m3: i64,
    pub m4: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FermatSets {
    pub grid: Vec<FermatCell>,
    /// Cell with `(i, j) = (-1, -1)` at the shifted level `k - 1`.
    pub special: Option<FermatCell>,
    pub special_multiplicity: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ContributionSets {
    Chain(MixedSets),
    Loop(MixedSets),
    Fermat(FermatSets),
}

impl ContributionSets {
    /// Total rank contributed at this level.
    pub fn total(&self) -> u64 {
        match self {
            ContributionSets::Chain(s) | ContributionSets::Loop(s) => {
                (s.w.len() + s.x.len() + s.z.len()) as u64 + s.eta * s.y.len() as u64
            }
            ContributionSets::Fermat(s) => {
                s.grid.len() as u64 + s.special.map_or(0, |_| s.special_multiplicity)
            }
        }
    }
}

/// Enumerate the contribution sets at level `k <= 0`.
///
/// # Panics
/// If `k > 0`.
pub fn contribution_sets(spec: &PolySpec, k: i64) -> ContributionSets {
    assert!(k <= 0, "level k = {k} must be non-positive");
    let (p, q) = (spec.p(), spec.q());
    let bounds = match spec.kind() {
        Kind::Fermat => return ContributionSets::Fermat(fermat_sets(p, q, k)),
        Kind::Chain => MixedBounds {
            modulus: p + q - 1,
            w_hi: q - 2,
            x_hi: 2 * (p - 1),
            z_hi: p - 2,
            i_max: q - 2,
            eta: (p - 1).gcd(&q) - 1,
        },
        Kind::Loop => MixedBounds {
            modulus: p + q - 2,
            w_hi: 2 * (q - 1),
            x_hi: p - 1,
            z_hi: p - 2,
            i_max: q - 1,
            eta: (p - 1).gcd(&(q - 1)) - 1,
        },
    };
    let sets = mixed_sets(p, k, bounds);
    match spec.kind() {
        Kind::Chain => ContributionSets::Chain(sets),
        _ => ContributionSets::Loop(sets),
    }
}

/// Chain and loop sets share one shape, with `M` the residue modulus:
///   W: m <= -k,  1 <= -M m - (p-1)k <= w_hi
///   X: m >= 0,   0 <= M m + (p-1)k <= x_hi
///   Y: M m = (p-1)(1-k)
///   Z_i: 1 <= M m + i + (p-1)k <= z_hi,  1 <= i <= i_max
struct MixedBounds {
    modulus: i64,
    w_hi: i64,
    x_hi: i64,
    z_hi: i64,
    i_max: i64,
    eta: i64,
}

fn mixed_sets(p: i64, k: i64, b: MixedBounds) -> MixedSets {
    let big_m = b.modulus;
    let shift = (p - 1) * k;
    let w = multiples_in(big_m, -shift - b.w_hi, -shift - 1).filter(|&m| m <= -k).collect();
    let x = multiples_in(big_m, -shift, b.x_hi - shift).filter(|&m| m >= 0).collect();
    let target = (p - 1) * (1 - k);
    let y = if target % big_m == 0 { vec![target / big_m] } else { vec![] };
    let z = (1..=b.i_max)
        .flat_map(|i| multiples_in(big_m, 1 - i - shift, b.z_hi - i - shift).map(move |m| (i, m)))
        .collect();
    MixedSets { w, x, y, z, eta: b.eta as u64 }
}

fn fermat_sets(e: i64, f: i64, k: i64) -> FermatSets {
    let total = e + f;
    let mut grid = Vec::new();
    for i in 0..=e - 2 {
        for j in 0..=f - 2 {
            // i + e m3 = j + f m4 with m3 + m4 = -k
            let num = j - i - f * k;
            if num % total == 0 {
                let m3 = num / total;
                if i + e * m3 >= 0 {
                    grid.push(FermatCell { i, j, m3, m4: -k - m3 });
                }
            }
        }
    }
    // Shifted level s = k - 1: -1 + e m3 = -1 + f m4 with m3 + m4 = 1 - k.
    let num = f * (1 - k);
    let special = (num % total == 0)
        .then(|| num / total)
        .filter(|m3| e * m3 >= 1)
        .map(|m3| FermatCell { i: -1, j: -1, m3, m4: 1 - k - m3 });
    FermatSets { grid, special, special_multiplicity: (e.gcd(&f) - 1) as u64 }
}

/// `(bidegree, multiplicity)` for every contribution at level `k`.
pub fn level_bidegrees(spec: &PolySpec, k: i64) -> Vec<(i64, u64)> {
    let (p, q) = (spec.p(), spec.q());
    let mut out = Vec::new();
    match contribution_sets(spec, k) {
        ContributionSets::Chain(s) => {
            out.extend(s.w.iter().map(|m| (-p * (m + k), 1)));
            out.extend(s.x.iter().map(|m| ((q - 1) * m - k, 1)));
            out.extend(s.y.iter().map(|m| ((q - 1) * m - k, s.eta)));
            out.extend(s.z.iter().map(|(i, m)| ((q - 1) * m - k + i, 1)));
        }
        ContributionSets::Loop(s) => {
            out.extend(s.w.iter().map(|m| (-(p - 1) * m - p * k, 1)));
            out.extend(s.x.iter().map(|m| ((q - 1) * m - k, 1)));
            out.extend(s.y.iter().map(|m| ((q - 1) * m - k, s.eta)));
            out.extend(s.z.iter().map(|(j, m)| ((q - 1) * m - k + j, 1)));
        }
        ContributionSets::Fermat(s) => {
            out.extend(s.grid.iter().map(|c| (c.i + p * c.m3, 1)));
            if let Some(c) = s.special {
                out.push((-1 + p * c.m3, s.special_multiplicity));
            }
        }
    }
    out.retain(|&(_, m)| m > 0);
    out
}

/// Rank of `SH^{2k}` (equal to that of `SH^{2k+1}`) from the residue formula.
pub fn sh_rank_piecewise(spec: &PolySpec, k: i64) -> u64 {
    assert!(k <= 0, "level k = {k} must be non-positive");
    let (p, q) = (spec.p(), spec.q());
    let r = residue_q(spec, k);
    let modulus = residue_modulus(spec);
    let rank = match spec.kind() {
        Kind::Chain => {
            let (lo, hi) = ((p - 1).min(q), (p - 1).max(q));
            match r {
                0 => (p - 1).gcd(&q),
                r if r <= lo => r,
                r if r <= hi => lo,
                r => modulus - r,
            }
        }
        Kind::Loop => {
            let (lo, hi) = (p.min(q), p.max(q));
            match r {
                0 => (p - 1).gcd(&(q - 1)) + 1,
                r if r < lo => r + 1,
                r if r < hi => lo,
                r => modulus - r + 1,
            }
        }
        Kind::Fermat => {
            let (lo, hi) = (p.min(q), p.max(q));
            match r {
                0 => p.gcd(&q) - 1,
                r if r <= lo => r - 1,
                r if r <= hi => lo - 1,
                r => modulus - r - 1,
            }
        }
    };
    debug_assert!(rank >= 0);
    rank as u64
}

/// Level `k` carrying degree `r <= 1` (degrees `2k` and `2k+1` share it).
pub fn level_of_degree(r: i64) -> i64 {
    Integer::div_floor(&r, &2)
}

/// Rank of `SH^r` for any integer degree.
pub fn sh_rank(spec: &PolySpec, r: i64) -> u64 {
    match r {
        r if r > 3 || r == 2 => 0,
        3 => spec.milnor_number() as u64,
        r => sh_rank_piecewise(spec, level_of_degree(r)),
    }
}

/// Bidegree-resolved ranks over `[r_min, r_max]` from the contribution sets.
pub fn bigraded_profile(spec: &PolySpec, r_min: i64, r_max: i64) -> BigradedProfile {
    let mut out = BigradedProfile::new(r_min, r_max);
    if r_min <= 3 && 3 <= r_max {
        out.add(3, -1, spec.milnor_number() as u64);
    }
    let top = r_max.min(1);
    if r_min > top {
        return out;
    }
    for k in level_of_degree(r_min)..=level_of_degree(top) {
        let cells = level_bidegrees(spec, k);
        for r in [2 * k, 2 * k + 1] {
            if out.contains_degree(r) && r <= 1 {
                for &(b0, m) in &cells {
                    out.add(r, b0, m);
                }
            }
        }
    }
    out
}

/// Cardinalities of the loop sets at level `k` from floor/ceiling formulas.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LoopCardinalities {
    pub x: i64,
    pub w: i64,
    /// `z[j-1]` is the count for index `j`, `1 <= j <= d-1`.
    pub z: Vec<i64>,
}

pub fn loop_set_cardinalities(spec: &PolySpec, k: i64) -> Result<LoopCardinalities, SpecError> {
    if spec.kind() != Kind::Loop {
        return Err(SpecError::NotLoop(*spec));
    }
    assert!(k <= 0, "level k = {k} must be non-positive");
    let (c, d) = (spec.p(), spec.q());
    let m = c + d - 2;
    let r = ((c - 1) * (1 - k)).mod_floor(&m);
    let x = 1 + Integer::div_floor(&(c - 1 - r), &m);
    let w = Integer::div_floor(&(r - c), &m) - Integer::div_ceil(&(r - (d - 1)), &m) + 2;
    let z = (1..d)
        .map(|j| Integer::div_floor(&(r - 1 - j), &m) - Integer::div_ceil(&(r - (c - 2) - j), &m) + 1)
        .collect();
    Ok(LoopCardinalities { x, w, z })
}
