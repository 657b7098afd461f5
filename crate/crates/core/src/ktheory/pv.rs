//! Pimsner–Voiculescu assembly for the crossed product by the shift.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::limit::{one_minus_shift, AbelianGroupDescriptor, ShiftHomology, StationaryLimit};
use crate::error::Result;

/// `0 → coker(1−σ on K₀) → K₀(E) → ker(1−σ on K₁) → 0` and the same with the
/// indices swapped for `K₁(E)`. Kernels of `1 − σ` are free, so both
/// sequences split.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PvResult {
    pub k0: AbelianGroupDescriptor,
    pub k1: AbelianGroupDescriptor,
    pub k0_sub: AbelianGroupDescriptor,
    pub k0_quotient: AbelianGroupDescriptor,
    pub k1_sub: AbelianGroupDescriptor,
    pub k1_quotient: AbelianGroupDescriptor,
}

impl fmt::Display for PvResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K0(E) = {} ; K1(E) = {}", self.k0, self.k1)
    }
}

pub fn pv_assemble(k0: &StationaryLimit, k1: &StationaryLimit) -> Result<PvResult> {
    let h0: ShiftHomology = one_minus_shift(k0)?;
    let h1: ShiftHomology = one_minus_shift(k1)?;
    // The quotient terms are kernels of 1 − σ, free by construction, so the
    // extensions split.
    debug_assert!(h1.kernel.torsion.is_empty() && h1.kernel.localized.is_empty());
    debug_assert!(h0.kernel.torsion.is_empty() && h0.kernel.localized.is_empty());
    Ok(PvResult {
        k0: h0.cokernel.direct_sum(&h1.kernel),
        k1: h1.cokernel.direct_sum(&h0.kernel),
        k0_sub: h0.cokernel,
        k0_quotient: h1.kernel,
        k1_sub: h1.cokernel,
        k1_quotient: h0.kernel,
    })
}
