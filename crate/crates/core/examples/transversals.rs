//! Transversals `Rₙ`, digit decompositions and purity.

use endomorph::group::DEFAULT_CAP;
use endomorph::transversal::{purity_report, Transversal};
use endomorph::Endomorphism;

fn main() -> endomorph::Result<()> {
    for endo in [Endomorphism::integer(3)?, Endomorphism::dihedral(), Endomorphism::shift(2)?] {
        println!("== {}", endo.canonical_string());
        let t = Transversal::build(&endo, 2, DEFAULT_CAP)?;
        let reps: Vec<String> = t.reps().iter().map(ToString::to_string).collect();
        println!("R_2 = {{{}}}", reps.join(", "));
        let x = endo.ball(3, DEFAULT_CAP)?.pop().expect("nonempty ball");
        let d = endo.decompose(&x, 2)?;
        println!("{x} = a^2({}) * {}  digits {:?}", d.quotient, endo.element_from_digits(&d.digits), d.digits);
        println!("R-sequence of {x}: {:?}", endo.r_sequence(&x, 6)?.digits);
        let p = purity_report(&endo, 3, 16, DEFAULT_CAP)?;
        println!("purity on the radius-3 ball: {} elements, {} undecided", p.outcomes.len(), p.undecided());
    }
    Ok(())
}
