//! Contactomorphism verdicts for pairs of links.
//!
//! Two links are declared contactomorphic when the polynomials are joined by
//! a known deformation relation. Otherwise the first differing invariant is
//! reported as a separator.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closedform::bigraded_profile;
use crate::invariants::{period_window, signature, InvariantSignature};
use crate::polyspec::{Kind, PolySpec};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "relation")]
pub enum Relation {
    SameTypeEqual { spec: PolySpec },
    /// `b | a - 1` and `{c, d} = {b, ((a-1)/b)(b-1) + 1}`.
    ChainLoop { chain: PolySpec, other: PolySpec },
    /// `a - 1 | b`, `e = a`, `f = ab/(a-1)`.
    ChainFermat { chain: PolySpec, other: PolySpec },
    /// `c = d`, `e = f = c + 1`.
    LoopFermat { looped: PolySpec, other: PolySpec },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(flatten)]
    pub relation: Relation,
    /// Whether normalization swapped `x3` and `x4` in either input.
    pub swapped: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Separator {
    pub invariant: String,
    pub left: String,
    pub right: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome")]
pub enum Verdict {
    Contactomorphic { witness: Witness },
    Distinct { separator: Separator },
}

impl Verdict {
    pub fn is_contactomorphic(&self) -> bool {
        matches!(self, Verdict::Contactomorphic { .. })
    }
}

fn directed_relation(x: &PolySpec, y: &PolySpec) -> Option<Relation> {
    let (xp, xq, yp, yq) = (x.p(), x.q(), y.p(), y.q());
    match (x.kind(), y.kind()) {
        (Kind::Chain, Kind::Loop) => {
            let (a, b) = (xp, xq);
            let partner = (a - 1) / b * (b - 1) + 1;
            let mut pair = [b, partner];
            pair.sort();
            ((a - 1) % b == 0 && pair == [yp, yq]).then_some(Relation::ChainLoop { chain: *x, other: *y })
        }
        (Kind::Chain, Kind::Fermat) => {
            let (a, b) = (xp, xq);
            (b % (a - 1) == 0 && (yp, yq) == (a, a * b / (a - 1)))
                .then_some(Relation::ChainFermat { chain: *x, other: *y })
        }
        (Kind::Loop, Kind::Fermat) => {
            (xp == xq && yp == yq && yp == xp + 1).then_some(Relation::LoopFermat { looped: *x, other: *y })
        }
        _ => None,
    }
}

/// A deformation relation joining the two specs, if one is known.
pub fn deformation_relation(s1: &PolySpec, s2: &PolySpec) -> Option<Witness> {
    let (n1, n2) = (s1.normalize(), s2.normalize());
    let swapped = n1 != *s1 || n2 != *s2;
    let relation = if n1 == n2 {
        Some(Relation::SameTypeEqual { spec: n1 })
    } else {
        directed_relation(&n1, &n2).or_else(|| directed_relation(&n2, &n1))
    };
    relation.map(|relation| Witness { relation, swapped })
}

fn pair_str((a, b): (i64, i64)) -> String {
    format!("({a},{b})")
}

fn first_separator(s1: &PolySpec, s2: &PolySpec, x: &InvariantSignature, y: &InvariantSignature) -> Option<Separator> {
    let sep = |name: &str, l: String, r: String| Some(Separator { invariant: name.into(), left: l, right: r });
    if x.rho != y.rho {
        return sep("rho", x.rho.to_string(), y.rho.to_string());
    }
    if x.lambda != y.lambda {
        return sep("lambda", x.lambda.to_string(), y.lambda.to_string());
    }
    if x.mu != y.mu {
        return sep("mu", x.mu.to_string(), y.mu.to_string());
    }
    if x.rho >= 2 && (x.kappa, x.sigma) != (y.kappa, y.sigma) {
        return sep("kappa,sigma", pair_str((x.kappa, x.sigma)), pair_str((y.kappa, y.sigma)));
    }
    if x.rho == 1 && (x.theta, x.rho_b) != (y.theta, y.rho_b) {
        let show = |s: &InvariantSignature| pair_str((s.theta.unwrap_or(0), s.rho_b.unwrap_or(0)));
        return sep("theta,rho_b", show(x), show(y));
    }
    let lo = period_window(s1).0.min(period_window(s2).0);
    let (p1, p2) = (bigraded_profile(s1, lo, 3), bigraded_profile(s2, lo, 3));
    p1.diff(&p2).first().and_then(|d| {
        let cell = |v| format!("SH^{{{},{}}}={}", d.degree, d.bidegree, v);
        sep("profile", cell(d.left), cell(d.right))
    })
}

/// Contactomorphic iff a deformation relation exists; otherwise the first
/// separating invariant in the order rho, lambda, mu, (kappa, sigma),
/// (theta, rho_b), bigraded profile.
///
/// # Panics
/// If the specs are unrelated but no separator is found.
pub fn contactomorphic(s1: &PolySpec, s2: &PolySpec) -> Verdict {
    if let Some(witness) = deformation_relation(s1, s2) {
        return Verdict::Contactomorphic { witness };
    }
    let separator = first_separator(s1, s2, &signature(s1), &signature(s2))
        .unwrap_or_else(|| panic!("{s1} and {s2} are unrelated but share every invariant"));
    Verdict::Distinct { separator }
}

/// Signatures of all specs, sorted by spec.
pub fn signature_table(specs: &[PolySpec]) -> Vec<InvariantSignature> {
    let mut rows: Vec<InvariantSignature> = specs.par_iter().map(signature).collect();
    rows.sort_by_key(|s| s.spec);
    rows
}

/// The presentation-independent part of a signature: everything except the
/// spec itself, `g_w` and the tilde polynomial.
pub fn contact_invariants(s: &InvariantSignature) -> impl PartialEq + std::fmt::Debug {
    (s.rho, s.lambda, s.kappa, s.sigma, s.mu, s.b2, s.lct, s.small_res, s.theta, s.rho_b)
}

/// For related specs, check that invariants and profiles over the shared
/// window agree. Unrelated pairs pass trivially.
pub fn check_soundness(s1: &PolySpec, s2: &PolySpec, r_min: i64) -> Result<(), String> {
    if deformation_relation(s1, s2).is_none() {
        return Ok(());
    }
    let (x, y) = (signature(s1), signature(s2));
    if contact_invariants(&x) != contact_invariants(&y) {
        return Err(format!("{s1} ~ {s2}: signatures differ"));
    }
    let diff = bigraded_profile(s1, r_min, 3).diff(&bigraded_profile(s2, r_min, 3));
    if let Some(d) = diff.first() {
        return Err(format!("{s1} ~ {s2}: profiles differ at {d:?}"));
    }
    Ok(())
}

/// Every valid spec of the given kinds with both exponents in `[2, max]`.
pub fn grid(kinds: &[Kind], max: i64) -> Vec<PolySpec> {
    kinds
        .iter()
        .flat_map(|&k| (2..=max).flat_map(move |p| (2..=max).map(move |q| PolySpec::new(k, p, q).unwrap())))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(s: &str) -> PolySpec {
        s.parse().unwrap()
    }

    fn related(a: &str, b: &str) -> bool {
        deformation_relation(&spec(a), &spec(b)).is_some()
    }

    #[test]
    fn relation_examples() {
        let w = deformation_relation(&spec("chain:7,3"), &spec("loop:3,5")).unwrap();
        assert!(matches!(w.relation, Relation::ChainLoop { .. }));
        let w = deformation_relation(&spec("chain:2,3"), &spec("fermat:2,6")).unwrap();
        assert!(matches!(w.relation, Relation::ChainFermat { .. }));
        assert!(!related("chain:4,6", "loop:3,3"));
        assert!(related("loop:5,3", "chain:7,3"));
    }

    #[test]
    fn verdict_examples() {
        let v = contactomorphic(&spec("fermat:3,4"), &spec("fermat:4,3"));
        let Verdict::Contactomorphic { witness } = v else { panic!() };
        assert!(witness.swapped);
        let v = contactomorphic(&spec("fermat:2,4"), &spec("fermat:2,6"));
        let Verdict::Distinct { separator } = v else { panic!() };
        assert_eq!((separator.invariant.as_str(), separator.left.as_str(), separator.right.as_str()), ("mu", "3", "5"));
        let v = contactomorphic(&spec("chain:4,3"), &spec("fermat:4,4"));
        let Verdict::Contactomorphic { witness } = v else { panic!() };
        assert!(matches!(witness.relation, Relation::ChainFermat { .. }));
        let v = contactomorphic(&spec("chain:4,6"), &spec("loop:3,3"));
        let Verdict::Distinct { separator } = v else { panic!() };
        assert_eq!((separator.invariant.as_str(), separator.left.as_str(), separator.right.as_str()), ("mu", "21", "9"));
    }

    #[test]
    fn table_examples() {
        let rows = signature_table(&[spec("loop:3,5"), spec("chain:7,3")]);
        assert_eq!(rows[0].spec, spec("chain:7,3"));
        assert_eq!(contact_invariants(&rows[0]), contact_invariants(&rows[1]));
        assert!(signature_table(&[]).is_empty());
        let rows = signature_table(&[spec("fermat:2,2")]);
        assert_eq!((rows[0].rho, rows[0].lambda, rows[0].theta), (1, 1, Some(0)));
    }

    #[test]
    fn relation_is_an_equivalence_on_the_grid() {
        let specs = grid(&Kind::ALL, 7);
        for a in &specs {
            assert!(deformation_relation(a, a).is_some());
            for b in &specs {
                let ab = deformation_relation(a, b).is_some();
                assert_eq!(ab, deformation_relation(b, a).is_some());
                if !ab {
                    continue;
                }
                for c in &specs {
                    if deformation_relation(b, c).is_some() {
                        assert!(deformation_relation(a, c).is_some(), "{a} ~ {b} ~ {c}");
                    }
                }
            }
        }
    }

    #[test]
    fn same_type_verdicts_are_equality_up_to_swap() {
        for kind in Kind::ALL {
            let specs = grid(&[kind], 7);
            for a in &specs {
                for b in &specs {
                    let equal = a.normalize() == b.normalize();
                    assert_eq!(contactomorphic(a, b).is_contactomorphic(), equal, "{a} {b}");
                }
            }
        }
    }

    #[test]
    fn rho_one_chain_against_gcd_two_fermat() {
        for a in 2..=8 {
            for b in 2..=8 {
                let c = PolySpec::chain(a, b).unwrap();
                if signature(&c).rho != 1 {
                    continue;
                }
                for e in 2..=16 {
                    for f in e..=16 {
                        let fe = PolySpec::fermat(e, f).unwrap();
                        if signature(&fe).rho != 1 {
                            continue;
                        }
                        let want = a == 2 && e == 2 && f == 2 * b;
                        assert_eq!(contactomorphic(&c, &fe).is_contactomorphic(), want, "{c} {fe}");
                    }
                }
            }
        }
    }

    #[test]
    fn differing_rho_means_differing_b2() {
        for a in grid(&Kind::ALL, 5) {
            for b in grid(&Kind::ALL, 5) {
                if let Verdict::Distinct { separator } = contactomorphic(&a, &b) {
                    if separator.invariant == "rho" {
                        assert_ne!(signature(&a).b2, signature(&b).b2);
                    }
                }
            }
        }
    }
}
