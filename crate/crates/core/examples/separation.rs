//! Cylinders separated from their image under a semigroup word.

use endomorph::dynamics::{separation_check, DigitStream};
use endomorph::symbolic::parse_letters;
use endomorph::Endomorphism;

fn main() -> endomorph::Result<()> {
    let endo = Endomorphism::integer(3)?;
    for raw in ["S", "d(1)", "S* d(2) S", "S d(1) S*"] {
        let word = parse_letters(endo.family(), raw)?;
        for stream in [DigitStream::Random(7), DigitStream::Periodic(vec![]), DigitStream::RSequence(endo.parse("-1")?)] {
            println!("{raw:<10} {stream:?}: {:?}", separation_check(&endo, &word, &stream, 12)?);
        }
    }
    Ok(())
}
