//! Exit criteria. Each test prints one `PASS`/`FAIL` line; run with
//! `cargo test --test acceptance -- --nocapture --test-threads=1` to see them.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use endomorph::dynamics::{act, psi, Cylinder};
use endomorph::fn_algebra::{iota, FnElement};
use endomorph::group::{ShiftTuple, DEFAULT_CAP};
use endomorph::ktheory::{identify_limit, pv_assemble, smith_normal_form, IntMatrix, StationaryLimit};
use endomorph::ring::{coeff, coeff_frac, GroupRingElement};
use endomorph::transversal::{digits_of_index, index_of_digits};
use endomorph::verify::{
    check_alpha_star, check_cross_validation, check_iota, check_relations_at, check_separation, check_snf,
    check_stabilizers, check_tail_witness,
};
use endomorph::{Endomorphism, Family, GroupElement};

const SEED: u64 = 20240601;

type Outcome = Result<String, String>;

fn verdict(id: u32, name: &str, outcome: Outcome) {
    match outcome {
        Ok(detail) => println!("PASS criterion {id:>2} {name}: {detail}"),
        Err(why) => {
            println!("FAIL criterion {id:>2} {name}: {why}");
            panic!("criterion {id} failed: {why}");
        }
    }
}

fn lift<T>(r: endomorph::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// A check from `verify` must pass; its detail is kept.
fn holds(label: &str, r: endomorph::Result<(bool, String)>) -> Result<String, String> {
    match lift(r)? {
        (true, d) => Ok(format!("{label}: {d}")),
        (false, d) => Err(format!("{label}: {d}")),
    }
}

fn within(label: &str, start: Instant, bound: Duration) -> Result<(), String> {
    let took = start.elapsed();
    if took < bound {
        Ok(())
    } else {
        Err(format!("{label} took {took:?}, bound {bound:?}"))
    }
}

fn families() -> Vec<(String, Endomorphism)> {
    vec![
        ("Z, N=2".into(), Endomorphism::integer(2).unwrap()),
        ("Z, N=3".into(), Endomorphism::integer(3).unwrap()),
        ("Z2*Z2".into(), Endomorphism::dihedral()),
        ("shift Z2".into(), Endomorphism::shift(2).unwrap()),
        ("shift Z3".into(), Endomorphism::shift(3).unwrap()),
    ]
}

fn delta(g: GroupElement) -> GroupRingElement {
    GroupRingElement::delta(g)
}

fn matrix(endo: &Endomorphism, level: usize, entries: &[(usize, usize, GroupRingElement)]) -> FnElement {
    let mut m = FnElement::zero(endo, level).unwrap();
    for (i, j, a) in entries {
        m.add_entry(*i, *j, a);
    }
    m
}

fn iota_of(endo: &Endomorphism, a: GroupRingElement) -> Result<FnElement, String> {
    lift(iota(endo, &FnElement::from_ring(a)))
}

fn compare(label: &str, got: &FnElement, want: &FnElement) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{label}: got {}, want {}", got.to_matrix_string(), want.to_matrix_string()))
    }
}

#[test]
fn criterion_01_bunce_deddens_matrix() {
    let run = || -> Outcome {
        for n in [2i64, 3, 5] {
            let start = Instant::now();
            let endo = lift(Endomorphism::integer(n))?;
            let got = iota_of(&endo, delta(GroupElement::Int(1)))?;
            let n = n as usize;
            let mut want: Vec<_> = (0..n - 1).map(|i| (i, i + 1, delta(GroupElement::Int(0)))).collect();
            want.push((n - 1, 0, delta(GroupElement::Int(1))));
            compare(&format!("N={n}"), &got, &matrix(&endo, 1, &want))?;
            within(&format!("N={n}"), start, Duration::from_secs(1))?;
        }
        Ok("iota(z) is the cyclic shift with z in the corner for N = 2, 3, 5".into())
    };
    verdict(1, "Bunce-Deddens matrix", run());
}

#[test]
fn criterion_02_dihedral_displays() {
    let run = || -> Outcome {
        let start = Instant::now();
        let endo = Endomorphism::dihedral();
        let g = |s: &str| endo.parse(s).unwrap();
        let order: Vec<String> = endo.transversal().iter().map(|r| r.to_string()).collect();
        if order != ["e", "a", "b"] {
            return Err(format!("row order is {order:?}"));
        }
        let one = || delta(g("e"));
        let half = || GroupRingElement::scalar(Family::Dihedral, coeff_frac(1, 2));
        let projection = |x: &str| {
            let mut p = GroupRingElement::term(g("e"), coeff_frac(1, 2));
            p.add_term(g(x), coeff_frac(1, 2));
            p
        };

        compare("iota(1)", &iota_of(&endo, one())?, &FnElement::identity(&endo, 1).unwrap())?;
        let want_a = matrix(&endo, 1, &[(0, 1, one()), (1, 0, one()), (2, 2, delta(g("b")))]);
        compare("iota(d_a)", &iota_of(&endo, delta(g("a")))?, &want_a)?;
        let want_b = matrix(&endo, 1, &[(0, 2, one()), (1, 1, delta(g("a"))), (2, 0, one())]);
        compare("iota(d_b)", &iota_of(&endo, delta(g("b")))?, &want_b)?;
        let want_pa =
            matrix(&endo, 1, &[(0, 0, half()), (0, 1, half()), (1, 0, half()), (1, 1, half()), (2, 2, projection("b"))]);
        compare("iota(P_a)", &iota_of(&endo, projection("a"))?, &want_pa)?;

        // The second display is headed iota(d_b) but its entries are those of iota(P_b).
        let second =
            matrix(&endo, 1, &[(0, 0, half()), (0, 2, half()), (1, 1, projection("a")), (2, 0, half()), (2, 2, half())]);
        compare("iota(P_b) against the second display", &iota_of(&endo, projection("b"))?, &second)?;
        if iota_of(&endo, delta(g("b")))? == second {
            return Err("second display unexpectedly equals iota(d_b)".into());
        }
        within("displays", start, Duration::from_secs(1))?;
        Ok("iota(1), iota(d_a), iota(d_b), iota(P_a) exact; second P-display resolved as iota(P_b)".into())
    };
    verdict(2, "dihedral displays", run());
}

#[test]
fn criterion_03_shift_permutation_matrices() {
    let run = || -> Outcome {
        for m in [2u32, 3] {
            let start = Instant::now();
            let endo = lift(Endomorphism::shift(m))?;
            let row_of = |q: u32| {
                let r = GroupElement::Shift(ShiftTuple::new(m, vec![q]).unwrap());
                endo.digit_of(&r).ok_or_else(|| format!("({q}) is not in R_1"))
            };
            let tails: Vec<Vec<u32>> = vec![vec![], vec![1], vec![m - 1, 0, 1]];
            for a in 0..m {
                for tail in &tails {
                    let mut entries = vec![a];
                    entries.extend(tail);
                    let g = GroupElement::Shift(lift(ShiftTuple::new(m, entries))?);
                    let tail_delta = delta(GroupElement::Shift(lift(ShiftTuple::new(m, tail.clone()))?));
                    // right regular representation: row q carries a 1 in column q + a
                    let mut want = Vec::new();
                    for q in 0..m {
                        want.push((row_of(q)?, row_of((q + a) % m)?, tail_delta.clone()));
                    }
                    compare(&format!("m={m}, g={g}"), &iota_of(&endo, delta(g.clone()))?, &matrix(&endo, 1, &want))?;
                }
            }
            within(&format!("m={m}"), start, Duration::from_secs(1))?;
        }
        Ok("iota(d_g) is d_tail times the right-regular permutation for H = Z2, Z3".into())
    };
    verdict(3, "shift permutation matrices", run());
}

fn limit(rows: &[Vec<i64>]) -> Result<StationaryLimit, String> {
    if rows.is_empty() {
        return Ok(StationaryLimit::zero());
    }
    lift(StationaryLimit::new(lift(IntMatrix::from_rows(rows))?))
}

fn pv_case(label: &str, k0: &[Vec<i64>], k1: &[Vec<i64>], want0: &str, want1: &str) -> Result<(), String> {
    let start = Instant::now();
    let pv = lift(pv_assemble(&limit(k0)?, &limit(k1)?))?;
    let got = (pv.k0.to_string(), pv.k1.to_string());
    if got.0 != want0 || got.1 != want1 {
        return Err(format!("{label}: got K0 = {}, K1 = {}; want {want0}, {want1}", got.0, got.1));
    }
    within(label, start, Duration::from_secs(1))
}

#[test]
fn criterion_04_pimsner_voiculescu() {
    let run = || -> Outcome {
        for n in 2i64..=6 {
            let k0 = if n == 2 { "Z".to_string() } else { format!("Z (+) Z_{}", n - 1) };
            pv_case(&format!("Z, N={n}"), &[vec![n]], &[vec![1]], &k0, "Z")?;
        }
        pv_case("Z2*Z2", &[vec![3, 1, 1], vec![0, 0, 1], vec![0, 1, 0]], &[], "Z (+) Z_2", "Z")?;
        for n in 2i64..=5 {
            let k0 = if n == 2 { "0".to_string() } else { format!("Z_{}", n - 1) };
            pv_case(&format!("|H|={n}"), &[vec![n]], &[], &k0, "0")?;
        }
        Ok("Z: Z (+) Z_(N-1), Z for N = 2..6; Z2*Z2: Z (+) Z_2, Z; shift: Z_(n-1), 0".into())
    };
    verdict(4, "Pimsner-Voiculescu", run());
}

#[test]
fn criterion_05_identify_limit() {
    let run = || -> Outcome {
        for n in [2i64, 3, 5, 6] {
            let got = identify_limit(&limit(&[vec![n]])?);
            let group = got.group().ok_or_else(|| format!("[[{n}]] not identified: {got:?}"))?;
            let want = format!("Z[1/{n}]");
            if group.to_string() != want {
                return Err(format!("[[{n}]] gives {group}, want {want}"));
            }
        }
        let got = identify_limit(&limit(&[vec![3, 1, 1], vec![0, 0, 1], vec![0, 1, 0]])?);
        let group = got.group().ok_or_else(|| format!("dihedral K0 map not identified: {got:?}"))?;
        if group.free_rank != 2 || !group.torsion.is_empty() || group.localized != [(3, 1)] {
            return Err(format!("dihedral K0 map gives {group}, want Z[1/3] (+) Z (+) Z"));
        }
        Ok(format!("[[N]] gives Z[1/N]; dihedral K0 map gives {group}"))
    };
    verdict(5, "identify_limit", run());
}

#[test]
fn criterion_06_iota_homomorphism() {
    let run = || -> Outcome {
        let start = Instant::now();
        let mut details = Vec::new();
        for (label, endo) in families() {
            details.push(holds(&label, check_iota(&endo, 100, SEED, DEFAULT_CAP))?);
        }
        within("iota suite", start, Duration::from_secs(30))?;
        Ok(details.join("; "))
    };
    verdict(6, "iota homomorphism suite", run());
}

#[test]
fn criterion_07_alpha_star_decay() {
    let run = || -> Outcome {
        let mut details = Vec::new();
        for (label, endo) in families() {
            details.push(holds(&label, check_alpha_star(&endo, 50, 16, SEED, DEFAULT_CAP))?);
        }
        Ok(details.join("; "))
    };
    verdict(7, "alpha-star decay", run());
}

/// Base-`N` add-with-carry on little-endian digits, dropping the overflow.
fn add_one(digits: &[usize], base: usize) -> Vec<usize> {
    let mut out = digits.to_vec();
    for d in out.iter_mut() {
        *d += 1;
        if *d < base {
            return out;
        }
        *d = 0;
    }
    out
}

#[test]
fn criterion_08_odometer() {
    let run = || -> Outcome {
        let start = Instant::now();
        let depth = 6;
        for n in [2i64, 3] {
            let endo = lift(Endomorphism::integer(n))?;
            let base = n as usize;
            // digit d of R_1 = {0, ..., N-1} is the integer d
            let value: Vec<usize> = endo
                .transversal()
                .iter()
                .map(|r| match r {
                    GroupElement::Int(v) => *v as usize,
                    other => panic!("unexpected representative {other}"),
                })
                .collect();
            let digit_of = |v: usize| value.iter().position(|&x| x == v).unwrap();
            for i in 0..base.pow(depth as u32) {
                let plain = digits_of_index(i, base, depth);
                let c = lift(Cylinder::new(&endo, plain.iter().map(|&v| digit_of(v)).collect()))?;
                let moved = lift(act(&endo, &c, &GroupElement::Int(1)))?;
                let want: Vec<usize> = add_one(&plain, base).into_iter().map(digit_of).collect();
                if moved.digits != want {
                    return Err(format!("N={n}: {c} moves to {moved}, odometer gives {want:?}"));
                }
            }
        }
        within("odometer", start, Duration::from_secs(5))?;
        Ok(format!("act(., 1) is add-with-carry on every depth-{depth} cylinder for N = 2, 3"))
    };
    verdict(8, "odometer equivalence", run());
}

/// Fiber census and truncation diagram for every `(k, n)` with
/// `|R₁|^{n+k} ≤ 10⁵`, counted here from `psi` alone.
fn psi_suite(endo: &Endomorphism) -> Result<usize, String> {
    const LIMIT: usize = 100_000;
    let base = endo.base();
    let mut pairs = 0;
    let (mut census_bad, mut diagram_bad) = (None, None);
    let mut n = 1;
    while base.pow(n as u32 + 1) <= LIMIT {
        let mut k = 1;
        while base.pow((n + k) as u32) <= LIMIT {
            let mut fibers = vec![0usize; base.pow(n as u32)];
            for i in 0..base.pow((n + k) as u32) {
                let input = digits_of_index(i, base, n + k);
                let out = lift(psi(endo, k, n, &input))?;
                fibers[index_of_digits(&out, base)] += 1;
                if n >= 2 && diagram_bad.is_none() {
                    let shorter = lift(psi(endo, k, n - 1, &input[..n + k - 1]))?;
                    if shorter[..] != out[..n - 1] {
                        diagram_bad = Some(format!("k={k} n={n}: truncation diagram fails at {input:?}"));
                    }
                }
            }
            let want = base.pow(k as u32);
            if let Some(bad) = fibers.iter().position(|&f| f != want) {
                census_bad.get_or_insert_with(|| {
                    format!("k={k} n={n}: output {bad} has {} preimages, want {want}", fibers[bad])
                });
            }
            pairs += 1;
            k += 1;
        }
        n += 1;
    }
    match (census_bad, diagram_bad) {
        (None, None) => Ok(pairs),
        (c, d) => Err(c.into_iter().chain(d).collect::<Vec<_>>().join(", ")),
    }
}

#[test]
fn criterion_09_psi_suite() {
    let run = || -> Outcome {
        let mut passed = Vec::new();
        let mut failed = Vec::new();
        for (label, endo) in families() {
            match psi_suite(&endo) {
                Ok(pairs) => passed.push(format!("{label}: {pairs} (k,n) pairs")),
                Err(why) => failed.push(format!("{label}: {why}")),
            }
        }
        if failed.is_empty() {
            Ok(passed.join("; "))
        } else {
            Err(format!("{} (passing: {})", failed.join("; "), passed.join("; ")))
        }
    };
    verdict(9, "psi suite", run());
}

#[test]
fn criterion_10_stabilizers() {
    let run = || -> Outcome {
        let mut details = Vec::new();
        for (label, endo) in families() {
            details.push(holds(&label, check_stabilizers(&endo, 3, 6, DEFAULT_CAP))?);
            if matches!(endo.family(), Family::Integer { .. }) {
                details.push(holds(&format!("{label} tail witness"), check_tail_witness(&endo))?);
            }
        }
        Ok(details.join("; "))
    };
    verdict(10, "stabilizers and freeness", run());
}

#[test]
fn criterion_11_separation() {
    let run = || -> Outcome {
        let mut details = Vec::new();
        for (label, endo) in families() {
            details.push(holds(&label, check_separation(&endo, 20, 12, SEED, DEFAULT_CAP))?);
        }
        Ok(details.join("; "))
    };
    verdict(11, "separation", run());
}

#[test]
fn criterion_12_cross_validation() {
    let run = || -> Outcome {
        let mut details = Vec::new();
        for (label, endo) in families() {
            details.push(holds(&format!("{label} words"), check_cross_validation(&endo, 100, 8, SEED, DEFAULT_CAP))?);
            details.push(holds(&format!("{label} relations"), check_relations_at(&endo, 8, DEFAULT_CAP))?);
        }
        Ok(details.join("; "))
    };
    verdict(12, "symbolic/numeric cross-validation", run());
}

/// `d₁⋯d_k = gcd of the k×k minors`.
fn snf_by_minors(a: &IntMatrix) -> Vec<i128> {
    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        if n < k {
            return vec![];
        }
        let mut out = subsets(n - 1, k);
        for mut s in subsets(n - 1, k - 1) {
            s.push(n - 1);
            out.push(s);
        }
        out
    }
    fn det(m: &[Vec<i128>]) -> i128 {
        if m.len() == 1 {
            return m[0][0];
        }
        (0..m.len())
            .map(|j| {
                let minor: Vec<Vec<i128>> =
                    m[1..].iter().map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect()).collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * det(&minor)
            })
            .sum()
    }
    fn gcd(a: i128, b: i128) -> i128 {
        if b == 0 { a.abs() } else { gcd(b, a % b) }
    }
    let rows = a.to_rows();
    let r = a.rows().min(a.cols());
    let mut prev = 1;
    let mut out = Vec::new();
    for k in 1..=r {
        let mut g = 0;
        for rs in subsets(a.rows(), k) {
            for cs in subsets(a.cols(), k) {
                let m: Vec<Vec<i128>> = rs.iter().map(|&i| cs.iter().map(|&j| rows[i][j]).collect()).collect();
                g = gcd(g, det(&m));
            }
        }
        if g == 0 {
            out.resize(r, 0);
            break;
        }
        out.push(g / prev);
        prev = g;
    }
    out
}

fn big_product(a: &IntMatrix, b: &IntMatrix) -> Vec<Vec<BigInt>> {
    (0..a.rows())
        .map(|i| (0..b.cols()).map(|j| (0..a.cols()).map(|k| BigInt::from(a.row(i)[k]) * b.row(k)[j]).sum()).collect())
        .collect()
}

fn big_triple(a: &IntMatrix, b: &IntMatrix, c: &IntMatrix) -> Vec<Vec<BigInt>> {
    let ab = big_product(a, b);
    (0..a.rows())
        .map(|i| (0..c.cols()).map(|j| (0..b.cols()).map(|k| &ab[i][k] * c.row(k)[j]).sum()).collect())
        .collect()
}

fn big_of(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    m.to_rows().into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect()
}

#[test]
fn criterion_13_snf() {
    let run = || -> Outcome {
        let start = Instant::now();
        holds("library check", check_snf(200, SEED))?;
        let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0x5eed);
        for _ in 0..200 {
            let (m, n) = (rng.random_range(1..=6), rng.random_range(1..=6));
            let rows: Vec<Vec<i64>> = (0..m).map(|_| (0..n).map(|_| rng.random_range(-20..=20)).collect()).collect();
            let a = lift(IntMatrix::from_rows(&rows))?;
            let s = lift(smith_normal_form(&a))?;
            if big_product(&s.u, &s.u_inv) != big_of(&IntMatrix::identity(m))
                || big_product(&s.v, &s.v_inv) != big_of(&IntMatrix::identity(n))
            {
                return Err(format!("transforms are not unimodular for {rows:?}"));
            }
            if big_triple(&s.u, &a, &s.v) != big_of(&s.d) {
                return Err(format!("UAV != D for {rows:?}"));
            }
            let want = snf_by_minors(&a);
            if s.diagonal() != want {
                return Err(format!("{rows:?}: diagonal {:?}, minors give {want:?}", s.diagonal()));
            }
        }
        let k0 = lift(IntMatrix::from_rows(&[vec![3i64, 1, 1], vec![0, 0, 1], vec![0, 1, 0]]))?;
        let shifted = k0.minus_scalar(1);
        let want = snf_by_minors(&shifted);
        if want != [1, 2, 0] {
            return Err(format!("minor oracle gives {want:?} for A - I"));
        }
        let got = lift(smith_normal_form(&shifted))?.diagonal();
        if got != want {
            return Err(format!("A - I gives {got:?}, want {want:?}"));
        }
        within("SNF suite", start, Duration::from_secs(10))?;
        Ok("400 random matrices unimodular, divisible, UAV = D, diagonal matches minors; A - I gives diag(1,2,0)".into())
    };
    verdict(13, "Smith normal form", run());
}

#[test]
fn scalar_helpers_agree() {
    // guards the oracle helpers above
    assert_eq!(add_one(&[1, 1, 0], 2), vec![0, 0, 1]);
    assert_eq!(snf_by_minors(&IntMatrix::from_rows(&[vec![2i64, 0], vec![0, 3]]).unwrap()), vec![1, 6]);
    assert_eq!(GroupRingElement::scalar(Family::Dihedral, coeff(1)), delta(Endomorphism::dihedral().identity()));
}
