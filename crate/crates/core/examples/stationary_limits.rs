//! Smith normal form and stationary inductive limits `lim→(ℤᵈ, A)`.

use endomorph::ktheory::{identify_limit, one_minus_shift, smith_normal_form, IntMatrix, StationaryLimit};

fn main() -> endomorph::Result<()> {
    let dihedral = vec![vec![3i64, 1, 1], vec![0, 0, 1], vec![0, 1, 0]];
    let s = smith_normal_form(&IntMatrix::from_rows(&dihedral)?.minus_scalar(1))?;
    println!("SNF of A - I: {:?}", s.diagonal());

    for rows in [vec![vec![2i64]], vec![vec![6]], dihedral, vec![vec![2, 1], vec![0, 2]]] {
        let l = StationaryLimit::new(IntMatrix::from_rows(&rows)?)?;
        let h = one_minus_shift(&l)?;
        match identify_limit(&l).group() {
            Some(g) => println!("{rows:?}: lim = {g}; ker(1-s) = {}, coker(1-s) = {}", h.kernel, h.cokernel),
            None => println!("{rows:?}: not identified; ker(1-s) = {}, coker(1-s) = {}", h.kernel, h.cokernel),
        }
    }
    Ok(())
}
