//! Brute-force enumeration of good pairs `(γ, monomial)`.
//!
//! Roots of unity are stored as residues. Every variable's scaling under `γ`
//! is a phase in `Z/M` for a common modulus `M`, and "fixed" means phase 0.
//! A candidate exponent vector `b = (b0, .., b4)` is accepted when the
//! lattice system `Aᵀ x = (b1 - b0, .., b4 - b0)` has an integral solution,
//! in which case `N = b0 + Σ x`.

use std::fmt;

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::polyspec::{Kind, PolySpec};
use crate::profile::BigradedProfile;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("internal oracle error for {spec}: {detail}")]
    Internal { spec: PolySpec, detail: String },
}

/// An element of the kernel of the character.
///
/// `s1, s2` are exponents of `-1`; `j` (or `j3, j4`) are exponents of a
/// primitive root of unity of order `d_w` (or `e`, `f`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum GroupElement {
    Cyclic { s1: u8, s2: u8, j: i64 },
    Diagonal { s1: u8, s2: u8, j3: i64, j4: i64 },
}

impl GroupElement {
    pub fn is_identity(&self) -> bool {
        match *self {
            GroupElement::Cyclic { s1, s2, j } => s1 == 0 && s2 == 0 && j == 0,
            GroupElement::Diagonal { s1, s2, j3, j4 } => s1 == 0 && s2 == 0 && j3 == 0 && j4 == 0,
        }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Cyclic { s1, s2, j } => write!(f, "({s1},{s2},{j})"),
            GroupElement::Diagonal { s1, s2, j3, j4 } => write!(f, "({s1},{s2},{j3},{j4})"),
        }
    }
}

/// Which of `x0..x4` are fixed by `γ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FixedData {
    /// Indexed by variable, `fixed[0]` is `x0`.
    pub fixed: [bool; 5],
    /// Number of fixed variables among `x1..x4`.
    pub alpha: i64,
}

/// Basis of the Jacobian ring of `w` restricted to the fixed locus.
///
/// Monomials are `(b3, b4)` exponent pairs; an unfixed variable carries `-1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum JacobianBasis {
    Monomials(Vec<[i64; 2]>),
    /// Loop restricted to `x3 = 0`: both mixed terms vanish and `x4` is free.
    FreeVariable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum PairClass {
    A,
    B,
    C,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct GoodPair {
    pub gamma: GroupElement,
    pub b: [i64; 5],
    pub class: PairClass,
    pub n: i64,
    pub degree: i64,
    pub bidegree: i64,
}

impl fmt::Display for GoodPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [b0, b1, b2, b3, b4] = self.b;
        write!(
            f,
            "γ={} b=({b0},{b1},{b2},{b3},{b4}) class={:?} N={} deg={} bideg={}",
            self.gamma, self.class, self.n, self.degree, self.bidegree
        )
    }
}

/// Degree attached to a pair of the given class.
pub fn pair_degree(class: PairClass, n: i64, alpha: i64) -> i64 {
    match class {
        PairClass::A => 2 * n + 3 - alpha + 1,
        PairClass::B | PairClass::C => 2 * n + 3 - alpha + 2,
    }
}

/// All elements of the kernel, each once, in canonical order.
pub fn kernel_elements(spec: &PolySpec) -> Vec<GroupElement> {
    let signs = [(0u8, 0u8), (0, 1), (1, 0), (1, 1)];
    match spec.group_order_dw() {
        Ok(dw) => signs
            .iter()
            .flat_map(|&(s1, s2)| (0..dw).map(move |j| GroupElement::Cyclic { s1, s2, j }))
            .collect(),
        Err(_) => {
            let (e, f) = (spec.p(), spec.q());
            signs
                .iter()
                .flat_map(|&(s1, s2)| {
                    (0..e).flat_map(move |j3| (0..f).map(move |j4| GroupElement::Diagonal { s1, s2, j3, j4 }))
                })
                .collect()
        }
    }
}

/// Phases of `x0..x4` in `Z/M`, and `M`.
fn phases(spec: &PolySpec, g: &GroupElement) -> ([i64; 5], i64) {
    match *g {
        GroupElement::Cyclic { s1, s2, j } => {
            let dw = spec.group_order_dw().expect("cyclic element on a cyclic spec");
            let m = 2 * dw;
            let a33 = spec.p();
            let (u1, u2, u3) = (s1 as i64 * dw, s2 as i64 * dw, 2 * j);
            let u4 = -a33 * u3;
            let u0 = -u1 - u2 + (a33 - 1) * u3;
            ([u0, u1, u2, u3, u4].map(|x| x.mod_floor(&m)), m)
        }
        GroupElement::Diagonal { s1, s2, j3, j4 } => {
            let (e, f) = (spec.p(), spec.q());
            let m = 2 * e * f;
            let ph = [s1 as i64 * e * f, s2 as i64 * e * f, j3 * 2 * f, j4 * 2 * e];
            let u0 = -ph.iter().sum::<i64>();
            ([u0, ph[0], ph[1], ph[2], ph[3]].map(|x| x.mod_floor(&m)), m)
        }
    }
}

pub fn fixed_data(spec: &PolySpec, g: &GroupElement) -> FixedData {
    let (ph, _) = phases(spec, g);
    let fixed = ph.map(|x| x == 0);
    let alpha = fixed[1..].iter().filter(|&&f| f).count() as i64;
    FixedData { fixed, alpha }
}

pub fn jacobian_basis(spec: &PolySpec, fd: &FixedData) -> Result<JacobianBasis, OracleError> {
    let (p, q) = (spec.p(), spec.q());
    let (f3, f4) = (fd.fixed[3], fd.fixed[4]);
    let mut out = Vec::new();
    match (spec.kind(), f3, f4) {
        (_, false, false) => out.push([-1, -1]),
        (Kind::Chain, true, true) => {
            out.extend((0..=2 * (p - 1)).map(|i| [i, 0]));
            out.extend((1..=q - 2).map(|j| [0, j]));
            out.extend((1..=p - 2).flat_map(|i| (1..=q - 2).map(move |j| [i, j])));
        }
        (Kind::Loop, true, true) => {
            out.extend((0..p).map(|i| [i, 0]));
            out.extend((1..=2 * (q - 1)).map(|j| [0, j]));
            out.extend((1..=p - 2).flat_map(|i| (1..q).map(move |j| [i, j])));
        }
        (Kind::Fermat, true, true) => {
            out.extend((0..=p - 2).flat_map(|i| (0..=q - 2).map(move |j| [i, j])));
        }
        (Kind::Chain | Kind::Fermat, false, true) => out.extend((0..=q - 2).map(|j| [-1, j])),
        (Kind::Loop, false, true) => return Ok(JacobianBasis::FreeVariable),
        (Kind::Fermat, true, false) => out.extend((0..=p - 2).map(|i| [i, -1])),
        (_, true, false) => {
            return Err(OracleError::Internal {
                spec: *spec,
                detail: "x3 fixed with x4 moving is impossible for chain and loop".into(),
            })
        }
    }
    Ok(JacobianBasis::Monomials(out))
}

/// Integral solution of `Aᵀ x = v`, if any.
fn lattice_solve(spec: &PolySpec, v: [i64; 4]) -> Option<[i64; 4]> {
    if v[0] % 2 != 0 || v[1] % 2 != 0 {
        return None;
    }
    // Transposed block [[a33, a43], [a34, a44]] and its adjugate.
    let [[a33, a34], [a43, a44]] = spec.block();
    let det = spec.block_det();
    let n3 = a44 * v[2] - a43 * v[3];
    let n4 = -a34 * v[2] + a33 * v[3];
    if n3 % det != 0 || n4 % det != 0 {
        return None;
    }
    Some([v[0] / 2, v[1] / 2, n3 / det, n4 / det])
}

impl GoodPair {
    /// Re-check the character congruences, the weight relation, class
    /// constraints and the degree formula.
    pub fn validate(&self, spec: &PolySpec) -> Result<(), String> {
        let fd = fixed_data(spec, &self.gamma);
        let [b0, b1, b2, b3, b4] = self.b;
        if (b1 - b0) % 2 != 0 || (b2 - b0) % 2 != 0 {
            return Err("parity of b1, b0, b2 differs".into());
        }
        for i in 1..=4 {
            let want = if fd.fixed[i] { self.b[i] >= 0 } else { self.b[i] == -1 };
            if !want {
                return Err(format!("exponent of x{i} inconsistent with its fixed flag"));
            }
        }
        if fd.fixed[1] && b1 != 0 || fd.fixed[2] && b2 != 0 {
            return Err("fixed x1, x2 must carry exponent 0".into());
        }
        match self.class {
            PairClass::A if !(fd.fixed[0] && b0 >= 0) => return Err("class A needs x0 fixed, b0 >= 0".into()),
            PairClass::B if !(fd.fixed[0] && b0 >= -1) => return Err("class B needs x0 fixed".into()),
            PairClass::C if fd.fixed[0] || b0 != -1 => return Err("class C needs x0 moving, b0 = -1".into()),
            _ => {}
        }
        let ws = spec.weight_system();
        let weighted: i64 = self.b.iter().zip(ws.all()).map(|(x, d)| x * d).sum();
        if weighted != self.n * ws.h {
            return Err("weight relation fails".into());
        }
        match spec.group_order_dw() {
            Ok(dw) => {
                let a33 = spec.p();
                if (-a33 * b4 + b3 + (a33 - 1) * b0) % dw != 0 {
                    return Err("cyclic character congruence fails".into());
                }
            }
            Err(_) => {
                let (e, f) = (spec.p(), spec.q());
                if (b0 - b3) % e != 0 || (b0 - b4) % f != 0 {
                    return Err("Fermat congruences fail".into());
                }
                let m = [(b0 - b1) / 2, (b0 - b2) / 2, (b0 - b3) / e, (b0 - b4) / f];
                if self.n != b0 - m.iter().sum::<i64>() {
                    return Err("Fermat N formula fails".into());
                }
            }
        }
        if self.degree != pair_degree(self.class, self.n, fd.alpha) || self.bidegree != b0 {
            return Err("degree or bidegree mismatch".into());
        }
        Ok(())
    }
}

struct Window {
    r_min: i64,
    r_max: i64,
}

/// Accept `b` for class `class` if it is a lattice point with degree in the window.
fn try_pair(
    spec: &PolySpec,
    g: &GroupElement,
    fd: &FixedData,
    class: PairClass,
    b: [i64; 5],
    win: &Window,
) -> Result<Option<GoodPair>, OracleError> {
    let v = [b[1] - b[0], b[2] - b[0], b[3] - b[0], b[4] - b[0]];
    let Some(x) = lattice_solve(spec, v) else { return Ok(None) };
    let n = b[0] + x.iter().sum::<i64>();
    let degree = pair_degree(class, n, fd.alpha);
    if degree < win.r_min || degree > win.r_max {
        return Ok(None);
    }
    let pair = GoodPair { gamma: *g, b, class, n, degree, bidegree: b[0] };
    pair.validate(spec).map_err(|detail| OracleError::Internal { spec: *spec, detail: format!("{pair}: {detail}") })?;
    Ok(Some(pair))
}

fn pairs_for_element(
    spec: &PolySpec,
    g: &GroupElement,
    win: &Window,
    parity_filter: bool,
) -> Result<Vec<GoodPair>, OracleError> {
    let fd = fixed_data(spec, g);
    if parity_filter && fd.fixed[1] != fd.fixed[2] {
        return Ok(vec![]);
    }
    let ws = spec.weight_system();
    let (h, d0) = (ws.h, ws.d0);
    let b12 = [fd.fixed[1], fd.fixed[2]].map(|f| if f { 0 } else { -1 });
    let classes: &[PairClass] = if fd.fixed[0] { &[PairClass::A, PairClass::B] } else { &[PairClass::C] };
    let mut out = Vec::new();
    match jacobian_basis(spec, &fd)? {
        JacobianBasis::Monomials(monos) => {
            // Degree >= r_min forces N >= N_min (class B/C bound, also valid for A).
            // From Σ b_i d_i = N h with d0 < 0:
            //   b0 <= (Σ_{i>=1} b_i d_i - N_min h) / (-d0).
            let n_min = Integer::div_ceil(&(win.r_min - 5 + fd.alpha), &2);
            for [b3, b4] in monos {
                let rest = [b12[0], b12[1], b3, b4];
                let s: i64 = rest.iter().zip(ws.d).map(|(x, d)| x * d).sum();
                for &class in classes {
                    let range = match class {
                        PairClass::C => -1..=-1,
                        _ => {
                            let lo = if class == PairClass::A { 0 } else { -1 };
                            lo..=Integer::div_floor(&(s - n_min * h), &(-d0))
                        }
                    };
                    for b0 in range {
                        let b = [b0, rest[0], rest[1], rest[2], rest[3]];
                        out.extend(try_pair(spec, g, &fd, class, b, win)?);
                    }
                }
            }
        }
        JacobianBasis::FreeVariable => {
            if fd.fixed[0] {
                return Err(OracleError::Internal {
                    spec: *spec,
                    detail: format!("x0 fixed in the free-variable case at γ={g}"),
                });
            }
            // Class C only: b0 = -1, b3 = -1, b4 = t >= 0. N grows with t;
            // degree <= r_max bounds N h = -d0 + b1 d1 + b2 d2 - d3 + t d4.
            let n_max = Integer::div_floor(&(win.r_max - 5 + fd.alpha), &2);
            let base = -d0 + b12[0] * ws.d[0] + b12[1] * ws.d[1] - ws.d[2];
            let t_max = Integer::div_floor(&(n_max * h - base), &ws.d[3]);
            for t in 0..=t_max {
                let b = [-1, b12[0], b12[1], -1, t];
                out.extend(try_pair(spec, g, &fd, PairClass::C, b, win)?);
            }
        }
    }
    Ok(out)
}

fn enumerate(spec: &PolySpec, r_min: i64, r_max: i64, parity_filter: bool) -> Result<Vec<GoodPair>, OracleError> {
    assert!(r_min <= r_max, "empty degree window [{r_min}, {r_max}]");
    let win = Window { r_min, r_max };
    let per_element: Vec<Vec<GoodPair>> = kernel_elements(spec)
        .par_iter()
        .map(|g| pairs_for_element(spec, g, &win, parity_filter))
        .collect::<Result<_, _>>()?;
    let mut out: Vec<GoodPair> = per_element.into_iter().flatten().collect();
    out.sort();
    Ok(out)
}

/// Every good pair with degree in `[r_min, r_max]`, canonically sorted.
pub fn enumerate_good_pairs(spec: &PolySpec, r_min: i64, r_max: i64) -> Result<Vec<GoodPair>, OracleError> {
    enumerate(spec, r_min, r_max, true)
}

/// As [`enumerate_good_pairs`] but without skipping elements with `u1 != u2`.
pub fn enumerate_good_pairs_unfiltered(
    spec: &PolySpec,
    r_min: i64,
    r_max: i64,
) -> Result<Vec<GoodPair>, OracleError> {
    enumerate(spec, r_min, r_max, false)
}

pub fn profile_of_pairs(pairs: &[GoodPair], r_min: i64, r_max: i64) -> BigradedProfile {
    let mut out = BigradedProfile::new(r_min, r_max);
    for p in pairs {
        out.add(p.degree, p.bidegree, 1);
    }
    out
}

pub fn oracle_profile(spec: &PolySpec, r_min: i64, r_max: i64) -> Result<BigradedProfile, OracleError> {
    Ok(profile_of_pairs(&enumerate_good_pairs(spec, r_min, r_max)?, r_min, r_max))
}
