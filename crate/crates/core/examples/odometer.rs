//! The action of `1 ∈ ℤ` on cylinders is the `N`-adic odometer.

use endomorph::dynamics::{act, odometer_check, Cylinder};
use endomorph::group::DEFAULT_CAP;
use endomorph::{Endomorphism, GroupElement};

fn main() -> endomorph::Result<()> {
    let endo = Endomorphism::integer(2)?;
    let mut c = Cylinder::new(&endo, vec![0, 0, 0])?;
    for _ in 0..9 {
        let next = act(&endo, &c, &GroupElement::Int(1))?;
        println!("{c} -> {next}");
        c = next;
    }
    for n in [2, 3] {
        let endo = Endomorphism::integer(n)?;
        println!("N = {n}, depth 6 agrees with add-with-carry: {}", odometer_check(&endo, 6, DEFAULT_CAP)?);
    }
    Ok(())
}
