//! The truncated regular representation: relation checks and norm bounds.

use endomorph::fn_algebra::alpha_star;
use endomorph::group::DEFAULT_CAP;
use endomorph::numerics::{check_relations, norm_lower_bound, TruncatedRep};
use endomorph::ring::GroupRingElement;
use endomorph::{Endomorphism, Family};

fn main() -> endomorph::Result<()> {
    let endo = Endomorphism::integer(2)?;
    let rep = TruncatedRep::new(&endo, 8, DEFAULT_CAP)?;
    println!("{}", check_relations(&rep, &endo.ball(2, DEFAULT_CAP)?)?);

    let a = GroupRingElement::parse(Family::Integer { multiplier: 2 }, "1 + d(1)")?;
    for radius in [8, 16, 32, 64] {
        let rep = TruncatedRep::new(&endo, radius, DEFAULT_CAP)?;
        println!("radius {radius:>2}: ||1 + z|| >= {:.6}", norm_lower_bound(&rep, &a, 500));
    }

    let mut b = GroupRingElement::parse(Family::Integer { multiplier: 2 }, "d(4) - d(-3)")?;
    for m in 0..4 {
        println!("alpha*^{m}: {b}  norm >= {:.4}", norm_lower_bound(&rep, &b, 200));
        b = alpha_star(&endo, &b);
    }
    Ok(())
}
