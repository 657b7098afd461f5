//! Exact computations for the C*-algebra generated by the left regular
//! representation of a discrete group `G` together with the isometry induced
//! by an injective finite-index endomorphism `α : G → G`.
//!
//! The crate covers:
//!
//! * [`group`]: the three built-in families and their endomorphisms,
//! * [`transversal`]: coset transversals `Rₙ`, digit decompositions, purity
//!   and normality reports,
//! * [`ring`] and [`fn_algebra`]: group-ring arithmetic and the matrix model
//!   of the gauge-invariant building blocks, the inclusion `ι`, `α*`,
//! * [`symbolic`]: normal forms for words in `S`, `S*`, `δₓ`,
//! * [`dynamics`]: the action on cylinder sets, odometers, `Ψ` maps and
//!   separation,
//! * [`ktheory`]: Smith normal form, stationary inductive limits and the
//!   Pimsner–Voiculescu assembly,
//! * [`numerics`]: a truncated regular representation for cross-checks and
//!   norm lower bounds,
//! * [`config`] and [`verify`]: the configuration file and check suites used
//!   by the `endomorph` binary.

pub mod config;
pub mod dynamics;
pub mod error;
pub mod fn_algebra;
pub mod group;
pub mod ktheory;
pub mod numerics;
pub mod ring;
pub mod sample;
pub mod symbolic;
pub mod transversal;
pub mod verify;

pub use error::{Error, Result};
pub use group::{Endomorphism, Family, GroupElement};
