//! Contact invariants read off the rank profile, and checks of the rank
//! identities relating a polynomial to its tilde Fermat polynomial.

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::closedform::{sh_rank, sh_rank_piecewise};
use crate::polyspec::{self, Kind, PolySpec};
use crate::profile::BigradedProfile;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("requires rho {expected}, got rho = {rho}")]
    Precondition { expected: &'static str, rho: i64 },
    #[error("degree window [{0}, {1}] too small to certify the answer")]
    WindowTooSmall(i64, i64),
}

/// A fraction in lowest terms with positive denominator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fraction {
    pub num: i64,
    pub den: i64,
}

impl Fraction {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        let g = num.gcd(&den) * den.signum();
        Fraction { num: num / g, den: den / g }
    }
}

impl std::fmt::Display for Fraction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormalPeriod {
    /// `T`; the period is realised in degree `-T`.
    pub theta: i64,
    /// Minimal bidegree in degree `-T`.
    pub rho_b: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantSignature {
    pub spec: PolySpec,
    pub rho: i64,
    pub lambda: i64,
    pub kappa: i64,
    pub sigma: i64,
    pub mu: i64,
    pub b2: i64,
    pub lct: Fraction,
    pub small_res: Option<i64>,
    pub theta: Option<i64>,
    pub rho_b: Option<i64>,
    pub g_w: i64,
    #[serde(with = "polyspec::extended_serde")]
    pub tilde: PolySpec,
}

/// Minimum and maximum rank over degrees `r <= 1`.
pub fn rho_lambda(spec: &PolySpec) -> (i64, i64) {
    let (p, q) = (spec.p(), spec.q());
    match spec.kind() {
        Kind::Chain => ((p - 1).gcd(&q), (p - 1).min(q)),
        Kind::Loop => ((p - 1).gcd(&(q - 1)) + 1, p.min(q)),
        Kind::Fermat => (p.gcd(&q) - 1, p.min(q) - 1),
    }
}

/// First concentrated degree and its support, from the table formulas.
pub fn kappa_sigma(spec: &PolySpec) -> (i64, i64) {
    let (p, q) = (spec.p(), spec.q());
    let (rho, _) = rho_lambda(spec);
    let (span, prod, div) = match spec.kind() {
        Kind::Chain => (p - 1 + q, p * q, rho),
        Kind::Loop => (p + q - 2, p * q - 1, rho - 1),
        Kind::Fermat => (p + q, p * q, rho + 1),
    };
    debug_assert!(span % div == 0 && prod % div == 0, "{spec}: {div} must divide {span} and {prod}");
    (1 - span / div, prod / div - 1)
}

pub fn lct(spec: &PolySpec) -> Fraction {
    let (kappa, sigma) = kappa_sigma(spec);
    Fraction::new(1 - kappa, sigma + 1)
}

/// Degree window that certifies [`fcd_from_profile`] and
/// [`search_formal_period`] for this spec.
pub fn search_window(spec: &PolySpec) -> (i64, i64) {
    (-2 * (spec.p() + spec.q()), 1)
}

/// One full residue period of degrees ending at 1.
pub fn period_window(spec: &PolySpec) -> (i64, i64) {
    (2 * (1 - (spec.p() + spec.q())), 1)
}

/// Largest `k <= 0` with degree `2k+1` concentrated in a single bidegree,
/// together with that bidegree.
pub fn fcd_from_profile(profile: &BigradedProfile, rho: i64) -> Result<(i64, i64), InvariantError> {
    if rho < 2 {
        return Err(InvariantError::Precondition { expected: ">= 2", rho });
    }
    let (r_min, r_max) = profile.window();
    let mut k = 0;
    while 2 * k + 1 >= r_min {
        if 2 * k + 1 <= r_max {
            let mut cells = profile.bidegrees(2 * k + 1);
            if let (Some((b, _)), None) = (cells.next(), cells.next()) {
                return Ok((k, b));
            }
        }
        k -= 1;
    }
    Err(InvariantError::WindowTooSmall(r_min, r_max))
}

/// Formal period from closed formulas; present exactly when `rho = 1`.
pub fn formal_period(spec: &PolySpec) -> Option<FormalPeriod> {
    if rho_lambda(spec).0 != 1 {
        return None;
    }
    let s = spec.normalize();
    let (p, q) = (s.p(), s.q());
    let (theta, rho_b) = match s.kind() {
        Kind::Loop => unreachable!("loop rho is at least 2"),
        Kind::Fermat if p == 2 => (q - 2, q - 2),
        Kind::Fermat => (p + q - 2, p * q / 2 - 1),
        Kind::Chain if p == 2 => (2 * (q - 1), 2 * (q - 1)),
        Kind::Chain if p - 1 < q => (2 * (p + q - 2), p * q - 1),
        Kind::Chain => {
            // q < p - 1: the period is first reached where the residue is
            // modulus - 1, i.e. at 1 - k = q^{-1} mod (p - 1 + q).
            let modulus = p - 1 + q;
            let t = Integer::extended_gcd(&q, &modulus).x.mod_floor(&modulus);
            let n = ((p - 1) * t + 1) / modulus;
            (2 * (t - 1), (q - 1) * n + t - 1)
        }
    };
    Some(FormalPeriod { theta, rho_b })
}

/// Smallest even `T >= 0` with rank 1 in degree `-T`, rank `lambda` in
/// degree `-(T+2)`, and minimal bidegree in degree `-(T+1)` one more than
/// in degree `-T`.
pub fn search_formal_period(
    profile: &BigradedProfile,
    rho: i64,
    lambda: i64,
) -> Result<FormalPeriod, InvariantError> {
    if rho != 1 {
        return Err(InvariantError::Precondition { expected: "= 1", rho });
    }
    let (r_min, r_max) = profile.window();
    let mut t = 0;
    while -(t + 2) >= r_min {
        if -t <= r_max
            && profile.rank(-t) == 1
            && profile.rank(-(t + 2)) == lambda as u64
        {
            let lo = profile.min_bidegree(-t).expect("rank 1 has a bidegree");
            if profile.min_bidegree(-(t + 1)) == Some(lo + 1) {
                return Ok(FormalPeriod { theta: t, rho_b: lo });
            }
        }
        t += 2;
    }
    Err(InvariantError::WindowTooSmall(r_min, r_max))
}

/// `g_w` and the tilde Fermat polynomial (possibly with exponent 1).
pub fn q_factorialization(spec: &PolySpec) -> (i64, PolySpec) {
    let (p, q) = (spec.p(), spec.q());
    let (x, y) = match spec.kind() {
        Kind::Chain => (p - 1, q),
        Kind::Loop => (p - 1, q - 1),
        Kind::Fermat => (p, q),
    };
    let g = x.gcd(&y);
    let tilde = PolySpec::extended_fermat(x / g, y / g).expect("quotients are positive");
    (g, tilde)
}

/// Outcome of a named check with one line per failure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    pub failures: Vec<String>,
}

impl CheckReport {
    fn from_failures(name: &str, failures: Vec<String>) -> Self {
        CheckReport { name: name.to_string(), passed: failures.is_empty(), failures }
    }
}

/// Rank identity between `spec` and its tilde polynomial at level `k`:
/// chain `d = g(d~ + 1)`, loop `d - 1 = g(d~ + 1)`, Fermat `d + 1 = g(d~ + 1)`.
pub fn check_rank_relation(spec: &PolySpec, k: i64) -> CheckReport {
    let (g, tilde) = q_factorialization(spec);
    let d = sh_rank_piecewise(spec, k) as i64;
    let dt = sh_rank_piecewise(&tilde, k) as i64;
    let lhs = match spec.kind() {
        Kind::Chain => d,
        Kind::Loop => d - 1,
        Kind::Fermat => d + 1,
    };
    let rhs = g * (dt + 1);
    let failures = if lhs == rhs {
        vec![]
    } else {
        vec![format!("{spec} k={k}: rank {d}, tilde {tilde} rank {dt}, g={g}: {lhs} != {rhs}")]
    };
    CheckReport::from_failures("rank-relation", failures)
}

/// `dim SH^{2k} = g_w dim SH^{2k}(tilde) + b2` for all `k` in `[k_min, 0]`.
pub fn check_refined_conjecture(spec: &PolySpec, k_min: i64) -> CheckReport {
    let (g, tilde) = q_factorialization(spec);
    let (b2, _) = rho_lambda(spec);
    let failures = (k_min..=0)
        .filter_map(|k| {
            let d = sh_rank_piecewise(spec, k) as i64;
            let dt = sh_rank_piecewise(&tilde, k) as i64;
            (d != g * dt + b2).then(|| format!("{spec} k={k}: {d} != {g}*{dt} + {b2}"))
        })
        .collect();
    CheckReport::from_failures("refined", failures)
}

/// Constant rank over one period iff a small resolution exists, with the
/// constant equal to the number of exceptional curves.
pub fn check_el_conjecture(spec: &PolySpec) -> CheckReport {
    let (r_min, r_max) = period_window(spec);
    let ranks: Vec<u64> = (r_min..=r_max).map(|r| sh_rank(spec, r)).collect();
    let constant = ranks.iter().all(|&r| r == ranks[0]).then_some(ranks[0] as i64);
    let small = spec.small_resolution();
    let failures = if constant == small {
        vec![]
    } else {
        vec![format!("{spec}: constant rank {constant:?} but small resolution {small:?}")]
    };
    CheckReport::from_failures("el", failures)
}

pub fn signature(spec: &PolySpec) -> InvariantSignature {
    let (rho, lambda) = rho_lambda(spec);
    let (kappa, sigma) = kappa_sigma(spec);
    let (g_w, tilde) = q_factorialization(spec);
    let fp = formal_period(spec);
    InvariantSignature {
        spec: *spec,
        rho,
        lambda,
        kappa,
        sigma,
        mu: spec.milnor_number(),
        b2: rho,
        lct: lct(spec),
        small_res: spec.small_resolution(),
        theta: fp.map(|f| f.theta),
        rho_b: fp.map(|f| f.rho_b),
        g_w,
        tilde,
    }
}
