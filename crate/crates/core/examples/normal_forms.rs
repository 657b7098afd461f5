//! Normal forms of words in `S`, `S*` and `δₓ`, and their images in `𝔽ₙ`.

use endomorph::symbolic::{e_full, parse_letters, word_normalize, word_to_fn};
use endomorph::Endomorphism;

fn main() -> endomorph::Result<()> {
    let endo = Endomorphism::integer(2)?;
    for raw in ["S* S", "S S*", "d(1) S", "S* d(1) S", "S d(1) S*", "d(-1) S S* d(1)", "S S"] {
        let letters = parse_letters(endo.family(), raw)?;
        let w = word_normalize(&endo, &letters)?;
        println!("{raw:<12} = {w}   ({:?}, weights {:?})", w.classify(), w.weights());
        if w.weights() == [0].into() {
            println!("{:<12}   in F_1: {}", "", word_to_fn(&endo, &w, 1)?.to_matrix_string());
            println!("{:<12}   E(.):   {}", "", e_full(&endo, &w, 1)?.to_matrix_string());
        }
    }
    Ok(())
}
