//! `ℤ₂ ∗ ℤ₂` with `α(a) = aba`, `α(b) = bab`: index 3, image not normal.

use endomorph::config::default_k_matrices;
use endomorph::fn_algebra::{iota, FnElement};
use endomorph::ktheory::{identify_limit, pv_assemble};
use endomorph::ring::GroupRingElement;
use endomorph::transversal::normality_report;
use endomorph::group::DEFAULT_CAP;
use endomorph::{Endomorphism, Family};

fn main() -> endomorph::Result<()> {
    let endo = Endomorphism::dihedral();
    for raw in ["d(a)", "d(b)", "1/2 + 1/2*d(a)", "1/2 + 1/2*d(b)"] {
        let a = GroupRingElement::parse(Family::Dihedral, raw)?;
        println!("iota({raw}) = {}", iota(&endo, &FnElement::from_ring(a))?.to_matrix_string());
    }
    println!("{}", normality_report(&endo, 1, 4, DEFAULT_CAP)?);

    let (k0, k1) = default_k_matrices(Family::Dihedral);
    if let Some(g) = identify_limit(&k0).group() {
        println!("lim K0 = {g}");
    }
    println!("{}", pv_assemble(&k0, &k1)?);
    Ok(())
}
