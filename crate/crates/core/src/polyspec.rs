//! Suspended invertible polynomials `x1^2 + x2^2 + g(x3, x4)` with `g` of
//! chain, loop or Fermat type, together with their exponent matrices,
//! weight systems and the dual-singularity data derived from them.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// The three two-variable building blocks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    /// `x3^p x4 + x4^q`
    Chain,
    /// `x3^p x4 + x3 x4^q`
    Loop,
    /// `x3^p + x4^q`
    Fermat,
}

impl Kind {
    pub const ALL: [Kind; 3] = [Kind::Chain, Kind::Loop, Kind::Fermat];

    pub fn name(self) -> &'static str {
        match self {
            Kind::Chain => "chain",
            Kind::Loop => "loop",
            Kind::Fermat => "fermat",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kind {
    type Err = SpecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "chain" => Ok(Kind::Chain),
            "loop" => Ok(Kind::Loop),
            "fermat" => Ok(Kind::Fermat),
            other => Err(SpecError::UnknownKind(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("expected `<kind>:<p>,<q>`, got `{0}`")]
    Syntax(String),
    #[error("unknown polynomial kind `{0}` (expected chain, loop or fermat)")]
    UnknownKind(String),
    #[error("exponents must exceed 1 (got {p},{q})")]
    ExponentTooSmall { p: i64, q: i64 },
    #[error("{0} has no cyclic group order d_w")]
    NotCyclic(Kind),
    #[error("{0} is not a loop polynomial")]
    NotLoop(PolySpec),
}

/// A suspended polynomial identified by its kind and two free exponents.
///
/// Specs built through [`PolySpec::new`] or parsing always have both
/// exponents at least 2. [`PolySpec::extended_fermat`] additionally admits
/// exponent 1 for Fermat specs; these only arise as tilde polynomials.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PolySpec {
    kind: Kind,
    p: i64,
    q: i64,
}

/// Quasi-homogeneous weights `(d1, d2, d3, d4; h)` and the derived `d0 = h - sum(d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightSystem {
    pub d: [i64; 4],
    pub h: i64,
    pub d0: i64,
}

impl WeightSystem {
    /// Weights indexed by variable `x0..x4`.
    pub fn all(&self) -> [i64; 5] {
        [self.d0, self.d[0], self.d[1], self.d[2], self.d[3]]
    }
}

impl PolySpec {
    pub fn new(kind: Kind, p: i64, q: i64) -> Result<Self, SpecError> {
        if p < 2 || q < 2 {
            return Err(SpecError::ExponentTooSmall { p, q });
        }
        Ok(PolySpec { kind, p, q })
    }

    pub fn chain(a: i64, b: i64) -> Result<Self, SpecError> {
        Self::new(Kind::Chain, a, b)
    }

    pub fn loop_(c: i64, d: i64) -> Result<Self, SpecError> {
        Self::new(Kind::Loop, c, d)
    }

    pub fn fermat(e: i64, f: i64) -> Result<Self, SpecError> {
        Self::new(Kind::Fermat, e, f)
    }

    /// Fermat spec allowing exponent 1 (smooth in that variable).
    pub fn extended_fermat(e: i64, f: i64) -> Result<Self, SpecError> {
        if e < 1 || f < 1 {
            return Err(SpecError::ExponentTooSmall { p: e, q: f });
        }
        Ok(PolySpec { kind: Kind::Fermat, p: e, q: f })
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn is_extended(&self) -> bool {
        self.p < 2 || self.q < 2
    }

    /// Exponent matrix: row `i` holds the exponents of the `i`-th monomial.
    pub fn exponent_matrix(&self) -> [[i64; 4]; 4] {
        let (p, q) = (self.p, self.q);
        let (a34, a43) = match self.kind {
            Kind::Chain => (1, 0),
            Kind::Loop => (1, 1),
            Kind::Fermat => (0, 0),
        };
        [[2, 0, 0, 0], [0, 2, 0, 0], [0, 0, p, a34], [0, 0, a43, q]]
    }

    /// Lower-right 2x2 block `[[a33, a34], [a43, a44]]`.
    pub fn block(&self) -> [[i64; 2]; 2] {
        let m = self.exponent_matrix();
        [[m[2][2], m[2][3]], [m[3][2], m[3][3]]]
    }

    pub fn block_det(&self) -> i64 {
        let b = self.block();
        b[0][0] * b[1][1] - b[0][1] * b[1][0]
    }

    /// Exact solution of `A d = h (1,1,1,1)` cleared to coprime integers.
    pub fn weight_system(&self) -> WeightSystem {
        // With h = 1: d1 = d2 = 1/2 and the block gives d3, d4 over det.
        // Common denominator 2*det.
        let [[a33, a34], [a43, a44]] = self.block();
        let det = self.block_det();
        let raw = [det, det, 2 * (a44 - a34), 2 * (a33 - a43)];
        let h_raw = 2 * det;
        let g = raw.iter().fold(h_raw, |acc, x| acc.gcd(x));
        let d = raw.map(|x| x / g);
        let h = h_raw / g;
        let ws = WeightSystem { d, h, d0: h - d.iter().sum::<i64>() };
        #[cfg(any(test, debug_assertions))]
        {
            let a = self.exponent_matrix();
            for row in a {
                let s: i64 = row.iter().zip(ws.d).map(|(x, y)| x * y).sum();
                debug_assert_eq!(s, ws.h, "weight identity fails for {self}");
            }
            debug_assert_eq!(ws.d.iter().fold(ws.h, |acc, x| acc.gcd(x)), 1);
        }
        ws
    }

    /// Loop and Fermat specs with `p <= q`; chains unchanged.
    pub fn normalize(&self) -> PolySpec {
        match self.kind {
            Kind::Chain => *self,
            Kind::Loop | Kind::Fermat if self.p > self.q => {
                PolySpec { kind: self.kind, p: self.q, q: self.p }
            }
            _ => *self,
        }
    }

    /// Milnor number of the dual singularity.
    pub fn milnor_number(&self) -> i64 {
        let (p, q) = (self.p, self.q);
        match self.kind {
            Kind::Chain => p * (q - 1) + 1,
            Kind::Loop => p * q,
            Kind::Fermat => (p - 1) * (q - 1),
        }
    }

    /// Number of exceptional curves of a small resolution of the dual
    /// singularity, if one exists.
    pub fn small_resolution(&self) -> Option<i64> {
        let (p, q) = (self.p, self.q);
        let (x, y, shift) = match self.kind {
            Kind::Chain => (p - 1, q, 0),
            Kind::Loop => (p - 1, q - 1, 1),
            Kind::Fermat => (p, q, -1),
        };
        let m = x.min(y);
        (m == x.gcd(&y)).then_some(m + shift)
    }

    /// `det(A)/4`: the order of the cyclic factor of the symmetry group.
    pub fn group_order_dw(&self) -> Result<i64, SpecError> {
        match self.kind {
            Kind::Chain => Ok(self.p * self.q),
            Kind::Loop => Ok(self.p * self.q - 1),
            Kind::Fermat => Err(SpecError::NotCyclic(Kind::Fermat)),
        }
    }
}

impl fmt::Display for PolySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{},{}", self.kind, self.p, self.q)
    }
}

impl FromStr for PolySpec {
    type Err = SpecError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let syntax = || SpecError::Syntax(text.to_string());
        let (kind, rest) = text.trim().split_once(':').ok_or_else(syntax)?;
        let (p, q) = rest.split_once(',').ok_or_else(syntax)?;
        let kind: Kind = kind.trim().parse()?;
        let p: i64 = p.trim().parse().map_err(|_| syntax())?;
        let q: i64 = q.trim().parse().map_err(|_| syntax())?;
        PolySpec::new(kind, p, q)
    }
}

/// Parse `<kind>:<p>,<q>`.
pub fn parse_poly(text: &str) -> Result<PolySpec, SpecError> {
    text.parse()
}

#[derive(Serialize, Deserialize)]
struct RawSpec {
    #[serde(rename = "type")]
    kind: String,
    p: i64,
    q: i64,
}

impl Serialize for PolySpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RawSpec { kind: self.kind.name().to_string(), p: self.p, q: self.q }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PolySpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RawSpec::deserialize(d)?;
        let kind: Kind = raw.kind.parse().map_err(serde::de::Error::custom)?;
        PolySpec::new(kind, raw.p, raw.q).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for Fermat specs in the extended domain.
pub mod extended_serde {
    use super::*;

    pub fn serialize<S: Serializer>(spec: &PolySpec, s: S) -> Result<S::Ok, S::Error> {
        spec.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<PolySpec, D::Error> {
        let raw = RawSpec::deserialize(d)?;
        if raw.kind != "fermat" {
            return Err(serde::de::Error::custom("extended specs must be fermat"));
        }
        PolySpec::extended_fermat(raw.p, raw.q).map_err(serde::de::Error::custom)
    }
}
