//! Fiber censuses of `Ψₖⁿ`: uniform when the images `αⁿ(G)` are normal.

use endomorph::dynamics::psi_fiber_census;
use endomorph::group::DEFAULT_CAP;
use endomorph::Endomorphism;

fn main() -> endomorph::Result<()> {
    for endo in [Endomorphism::integer(2)?, Endomorphism::shift(3)?, Endomorphism::dihedral()] {
        for (k, n) in [(1, 1), (1, 2), (2, 2)] {
            let c = psi_fiber_census(&endo, k, n, DEFAULT_CAP)?;
            let (lo, hi) = (c.fibers.iter().min().unwrap(), c.fibers.iter().max().unwrap());
            let verdict = if c.uniform() { "uniform" } else { "NOT uniform" };
            println!("{:<28} k={k} n={n}: fibers {lo}..{hi}, expected {} ({verdict})", endo.canonical_string(), c.expected);
        }
    }
    Ok(())
}
