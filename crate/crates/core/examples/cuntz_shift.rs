//! The shift on `⊕ ℤ_m`: `ι` is the right regular representation, and the
//! K-theory is that of the Cuntz algebra `O_m`.

use endomorph::fn_algebra::{iota, FnElement};
use endomorph::ktheory::{pv_assemble, IntMatrix, StationaryLimit};
use endomorph::ring::GroupRingElement;
use endomorph::Endomorphism;

fn main() -> endomorph::Result<()> {
    for m in [2u32, 3] {
        let endo = Endomorphism::shift(m)?;
        for raw in ["(1)", "(1,1)", "(0,2)"] {
            let Ok(g) = endo.parse(raw) else { continue };
            let image = iota(&endo, &FnElement::from_ring(GroupRingElement::delta(g.clone())))?;
            println!("Z_{m}: iota(d{g}) = {}", image.to_matrix_string());
        }
        let k0 = StationaryLimit::new(IntMatrix::from_rows(&[vec![m as i64]])?)?;
        println!("Z_{m}: {}", pv_assemble(&k0, &StationaryLimit::zero())?);
    }
    Ok(())
}
