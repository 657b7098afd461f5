//! The inclusion `ι` for `ℤ` with `α(x) = Nx`: the Bunce–Deddens connecting map.

use endomorph::fn_algebra::{determinant, iota, iota_to, FnElement};
use endomorph::ring::GroupRingElement;
use endomorph::{Endomorphism, GroupElement};

fn main() -> endomorph::Result<()> {
    for n in 2..=5 {
        let endo = Endomorphism::integer(n)?;
        let z = FnElement::from_ring(GroupRingElement::delta(GroupElement::Int(1)));
        let once = iota(&endo, &z)?;
        println!("N = {n}: iota(z) = {}", once.to_matrix_string());
        println!("        det iota(z) = {}", determinant(&once)?);
    }
    let endo = Endomorphism::integer(2)?;
    let z = FnElement::from_ring(GroupRingElement::delta(GroupElement::Int(1)));
    println!("N = 2, two steps: {}", iota_to(&endo, &z, 2)?.to_matrix_string());
    Ok(())
}
