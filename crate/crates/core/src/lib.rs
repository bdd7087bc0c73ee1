//! Mod-2 admissibility of Weil polynomials for hyperelliptic Jacobians over
//! finite fields of odd characteristic.
//!
//! The crate covers the whole pipeline: finite-field and `F_2[t]` arithmetic,
//! the Weil polynomial data model with its label codec, the partition-indexed
//! admissible classes, the point-count congruence sieves, exhaustive Weil
//! polynomial enumeration, and hyperelliptic curve censuses.

pub mod arith;
pub mod error;
pub mod f2poly;
pub mod field;
pub mod weil;
pub mod partition;
pub mod admissibility;
pub mod sieve;
pub mod sturm;
pub mod enumerate;
pub mod census;

pub use error::{Error, Result};
pub use f2poly::F2Poly;
pub use field::{FiniteField, FqPoly};
pub use weil::{FullPoly, IsogenyLabel, Parities, PointCounts, WeilPolyCoeffs};
pub use partition::Partition;
