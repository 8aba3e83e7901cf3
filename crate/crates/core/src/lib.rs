//! Computational kernel for fusion rings and their exact factorizations.
//!
//! The crate works at the Grothendieck-ring level: based rings with
//! nonnegative integer structure constants, Frobenius-Perron dimension
//! data, fusion subring lattices and factorization criteria, finite group
//! machinery, exact Q/Z-valued cohomology, and the group-theoretical
//! constructions tying them together.

pub mod builtins;
pub mod cohomology;
pub mod constructions;
pub mod factorization;
pub mod fp;
pub mod group;
pub mod io;
pub mod module;
pub mod ring;
pub mod snf;

mod characters;

/// Default floating scalar for Frobenius-Perron numerics.
pub type Scalar = f64;

/// `FpData` at the default scalar.
pub type FpData64 = fp::FpData<f64>;
/// Single-precision variant, for callers that want it.
pub type FpData32 = fp::FpData<f32>;

pub use fp::{fp_data, regular_element, Real};
pub use group::{FiniteGroup, Subgroup};
pub use module::FusionModule;
pub use ring::{FusionRing, RawRing};
