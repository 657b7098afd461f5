//! Exact K-theory: Smith normal form, stationary inductive limits and the
//! Pimsner–Voiculescu sequence for the shift automorphism.

pub mod limit;
pub mod matrix;
pub mod pv;
pub mod snf;

pub use limit::{
    identify_limit, one_minus_shift, AbelianGroupDescriptor, Identification, LimitElement, ShiftHomology,
    StationaryLimit,
};
pub use matrix::IntMatrix;
pub use pv::{pv_assemble, PvResult};
pub use snf::{smith_normal_form, Snf};
