//! Exact computational toolkit for h-scattered subspaces of `F_{q^n}^r`.
//!
//! The crate builds a two-step field tower `F_p ⊂ F_q ⊂ F_{q^n}` with exact
//! arithmetic, exact linear algebra over both levels, and on top of those:
//!
//! - [`subspace`]: `F_q`-subspaces of `F_{q^n}^r`, scatteredness verification by
//!   exhaustive subspace enumeration, the Gabidulin / subgeometry / direct-sum
//!   constructions, hyperplane-intersection spectra and the dimension bound.
//! - [`dual`]: the Delsarte dual of a subspace realized in explicit coordinates
//!   through the quotient `(W + Γ^⊥)/Γ^⊥`.
//! - [`mrd`]: rank-metric codes spanned by linearized polynomials, minimum
//!   distance, MRD verdicts, idealisers, adjoints and the Delsarte dual of codes.
//! - [`qcombin`]: exact q-combinatorics (Gaussian binomials, q-Pochhammer,
//!   Carlitz inversion) and the spectrum identity pipeline ending in `A = 0`.
//! - [`linset`]: linear sets of `PG(r-1, q^n)`, point weights and the desk-scale
//!   uniqueness searches.
//!
//! Everything is exact: no floating point anywhere, counts are big integers and
//! identity checks run over arbitrary-precision rationals. All values are
//! immutable after construction and safe to share across threads.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod dual;
pub mod field;
pub mod gf;
pub mod linalg;
pub mod linset;
pub mod mrd;
pub mod qcombin;
pub mod subspace;

pub use gf::{FieldTower, DEFAULT_FIELD_CAP};
pub use subspace::FqSubspace;

/// Default ceiling for exhaustive enumerations (number of subspaces,
/// hyperplanes or vectors a single scan is allowed to visit).
pub const DEFAULT_ENUM_CAP: u64 = 1 << 22;
