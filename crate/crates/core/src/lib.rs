//! Symplectic cohomology rank profiles, bigradings and contact invariants
//! for Milnor fibers of suspended chain, loop and Fermat singularities.
//!
//! Every closed formula in [`closedform`] and [`invariants`] can be checked
//! against the brute-force enumerator in [`oracle`].

pub mod classify;
pub mod cli;
pub mod closedform;
pub mod invariants;
pub mod oracle;
pub mod polyspec;
pub mod profile;

pub use polyspec::{parse_poly, Kind, PolySpec, SpecError, WeightSystem};
pub use profile::BigradedProfile;
