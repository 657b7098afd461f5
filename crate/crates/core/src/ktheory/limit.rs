//! Stationary inductive limits `lim→(ℤᵈ, A)`.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::matrix::{characteristic_polynomial, IntMatrix};
use super::snf::{integer_kernel, rank, smith_normal_form};
use crate::error::{Error, Result};

/// `ℤ^r ⊕ ℤ_{t₁} ⊕ ⋯ ⊕ ℤ[1/λ]^m ⊕ ⋯`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianGroupDescriptor {
    pub free_rank: usize,
    /// Invariant factors, each at least 2, `t₁ | t₂ | ⋯`.
    pub torsion: Vec<u64>,
    /// `(λ, m)`: `m` summands `ℤ[1/λ]`, sorted by `λ`.
    pub localized: Vec<(u64, usize)>,
}

impl AbelianGroupDescriptor {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroupDescriptor { free_rank: rank, ..Self::default() }
    }

    /// Direct sum of `ℤ/tᵢ` over the given orders, in invariant-factor form.
    pub fn from_orders(free_rank: usize, orders: &[i128]) -> Self {
        // diag(a, b) ~ diag(gcd, lcm), pairwise until the chain divides
        let mut f: Vec<i128> = orders.iter().map(|t| t.abs()).collect();
        for i in 0..f.len() {
            for j in i + 1..f.len() {
                let g = f[i].gcd(&f[j]);
                if g != 0 {
                    (f[i], f[j]) = (g, f[i] / g * f[j]);
                }
            }
        }
        let torsion = f.into_iter().filter(|&t| t >= 2).map(|t| t as u64).collect();
        AbelianGroupDescriptor { free_rank, torsion, localized: vec![] }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty() && self.localized.is_empty()
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let orders: Vec<i128> = self.torsion.iter().chain(&other.torsion).map(|&t| t as i128).collect();
        let mut out = Self::from_orders(self.free_rank + other.free_rank, &orders);
        let mut loc = self.localized.clone();
        for &(l, m) in &other.localized {
            match loc.iter_mut().find(|(x, _)| *x == l) {
                Some(slot) => slot.1 += m,
                None => loc.push((l, m)),
            }
        }
        loc.sort();
        out.localized = loc;
        out
    }
}

impl fmt::Display for AbelianGroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z_{t}")));
        for &(l, m) in &self.localized {
            parts.push(if m == 1 { format!("Z[1/{l}]") } else { format!("Z[1/{l}]^{m}") });
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" (+) "))
        }
    }
}

/// `lim→(ℤᵈ, A)` for an injective `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StationaryLimit {
    a: IntMatrix,
}

/// The class of `v` placed at stage `stage`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitElement {
    pub v: Vec<i128>,
    pub stage: usize,
}

impl StationaryLimit {
    pub fn new(a: IntMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::InvalidInput("connecting matrix must be square".into()));
        }
        if a.determinant() == 0 {
            return Err(Error::NotInjective);
        }
        Ok(StationaryLimit { a })
    }

    /// The zero group, `d = 0`.
    pub fn zero() -> Self {
        StationaryLimit { a: IntMatrix::zeros(0, 0) }
    }

    pub fn rank(&self) -> usize {
        self.a.rows()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.a
    }

    pub fn raise(&self, x: &LimitElement, stage: usize) -> Result<LimitElement> {
        if stage < x.stage {
            return Err(Error::Precondition("cannot lower the stage of a limit element".into()));
        }
        let mut v = x.v.clone();
        for _ in x.stage..stage {
            v = self.a.mul_vec(&v);
        }
        Ok(LimitElement { v, stage })
    }

    pub fn equal(&self, x: &LimitElement, y: &LimitElement) -> bool {
        let s = x.stage.max(y.stage);
        match (self.raise(x, s), self.raise(y, s)) {
            (Ok(a), Ok(b)) => a.v == b.v,
            _ => false,
        }
    }

    pub fn add(&self, x: &LimitElement, y: &LimitElement) -> LimitElement {
        let s = x.stage.max(y.stage);
        let a = self.raise(x, s).expect("raising to a later stage");
        let b = self.raise(y, s).expect("raising to a later stage");
        LimitElement { v: a.v.iter().zip(&b.v).map(|(p, q)| p + q).collect(), stage: s }
    }

    pub fn neg(&self, x: &LimitElement) -> LimitElement {
        LimitElement { v: x.v.iter().map(|p| -p).collect(), stage: x.stage }
    }

    /// The shift `[(v, n)] ↦ [(v, n+1)]`, inverse to the connecting action.
    pub fn shift(&self, x: &LimitElement) -> LimitElement {
        LimitElement { v: x.v.clone(), stage: x.stage + 1 }
    }
}

/// Evidence for an identification `lim ≅ ℤ^u ⊕ ⨁ ℤ[1/|λ|]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LimitCertificate {
    /// Integer eigenvalues with multiplicities.
    pub eigenvalues: Vec<(i128, usize)>,
    /// Basis (columns) of `K = ℤᵈ ∩ (non-unit eigenspaces)`.
    pub nonunit_lattice: IntMatrix,
    /// `A` restricted to `K`, in that basis.
    pub restricted: IntMatrix,
    /// Eigenvectors of the restriction, in `K` coordinates (columns).
    pub eigen_lattice: IntMatrix,
    /// `[K : eigen_lattice]`.
    pub index: u128,
    /// Least `k` with `A^k K ⊆ eigen_lattice`.
    pub power: u32,
    /// Whether every prime of `index` divides some non-unit eigenvalue.
    pub index_on_eigen_primes: bool,
    /// `[ℤᵈ : span of all integer eigenvectors]`, for reference.
    pub full_eigen_index: u128,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Identification {
    Identified { group: AbelianGroupDescriptor, certificate: Box<LimitCertificate> },
    NotIdentified(String),
}

impl Identification {
    pub fn group(&self) -> Option<&AbelianGroupDescriptor> {
        match self {
            Identification::Identified { group, .. } => Some(group),
            Identification::NotIdentified(_) => None,
        }
    }
}

const MAX_POWER: u32 = 64;

fn divisors(n: i128) -> Vec<i128> {
    let n = n.abs();
    let mut out = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n % i == 0 {
            out.push(i);
            if i != n / i {
                out.push(n / i);
            }
        }
        i += 1;
    }
    out
}

/// Divide `p` by `(x − r)`; `None` if `r` is not a root.
fn deflate(p: &[i128], r: i128) -> Option<Vec<i128>> {
    let deg = p.len() - 1;
    let mut q = vec![0i128; deg];
    let mut carry = 0i128;
    for i in (1..=deg).rev() {
        carry = p[i] + carry * r;
        q[i - 1] = carry;
    }
    (p[0] + carry * r == 0).then_some(q)
}

/// Integer eigenvalues with algebraic multiplicity, or `None` if the
/// characteristic polynomial does not split over ℤ.
pub fn integer_spectrum(a: &IntMatrix) -> Option<Vec<(i128, usize)>> {
    let mut p = characteristic_polynomial(a);
    let mut out: Vec<(i128, usize)> = Vec::new();
    if p[0] == 0 {
        return None;
    }
    if p[0].abs() > 1_000_000_000_000 {
        return None;
    }
    let mut candidates: Vec<i128> = divisors(p[0]).into_iter().flat_map(|d| [d, -d]).collect();
    candidates.sort_by_key(|&d| (d.abs(), d));
    for r in candidates {
        while p.len() > 1 {
            match deflate(&p, r) {
                Some(q) => {
                    p = q;
                    match out.iter_mut().find(|(x, _)| *x == r) {
                        Some(slot) => slot.1 += 1,
                        None => out.push((r, 1)),
                    }
                }
                None => break,
            }
        }
    }
    (p.len() == 1).then_some(out)
}

fn primes(mut n: u128) -> Vec<u128> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Coordinates of `w` in the basis `k` of a saturated lattice.
fn coordinates(k: &IntMatrix, w: &[i128]) -> Result<Option<Vec<i128>>> {
    let s = smith_normal_form(k)?;
    let uw = s.u.mul_vec(w);
    let r = s.rank();
    if uw[r..].iter().any(|&x| x != 0) {
        return Ok(None);
    }
    let mut y = vec![0i128; k.cols()];
    for i in 0..r {
        let d = s.d[(i, i)];
        if uw[i] % d != 0 {
            return Ok(None);
        }
        y[i] = uw[i] / d;
    }
    Ok(Some(s.v.mul_vec(&y)))
}

fn eigen_columns(a: &IntMatrix, spectrum: &[(i128, usize)], pick: impl Fn(i128) -> bool) -> Result<Vec<Vec<i128>>> {
    let mut out = Vec::new();
    for &(l, _) in spectrum.iter().filter(|(l, _)| pick(*l)) {
        out.extend(integer_kernel(&a.minus_scalar(l))?);
    }
    Ok(out)
}

/// Identify `lim→(ℤᵈ, A)` for `A` diagonalizable over ℚ with integer
/// eigenvalues.
///
/// The unit eigenvalues contribute a free quotient `ℤᵘ` (the projection of
/// `ℤᵈ` onto their eigenspaces is a lattice preserved by a unimodular map), so
/// the limit splits as that quotient plus `lim→(K, A|K)` with `K` the integer
/// points of the non-unit eigenspaces. The latter is `⨁ ℤ[1/|λ|]` once some
/// power of `A` maps `K` into the lattice spanned by integer eigenvectors.
pub fn identify_limit(l: &StationaryLimit) -> Identification {
    identify(l).unwrap_or_else(|e| Identification::NotIdentified(e.to_string()))
}

fn identify(l: &StationaryLimit) -> Result<Identification> {
    let a = l.matrix();
    let d = a.rows();
    let Some(spectrum) = integer_spectrum(a) else {
        return Ok(Identification::NotIdentified("characteristic polynomial has non-integer roots".into()));
    };
    for &(lambda, mult) in &spectrum {
        let nullity = d - rank(&a.minus_scalar(lambda))?;
        if nullity != mult {
            return Ok(Identification::NotIdentified(format!(
                "eigenvalue {lambda} has algebraic multiplicity {mult} but geometric multiplicity {nullity}"
            )));
        }
    }
    let is_unit = |x: i128| x.abs() == 1;
    let unit_rank: usize = spectrum.iter().filter(|(x, _)| is_unit(*x)).map(|(_, m)| m).sum();

    let mut prod = IntMatrix::identity(d);
    for &(lambda, _) in spectrum.iter().filter(|(x, _)| !is_unit(*x)) {
        prod = &prod * &a.minus_scalar(lambda);
    }
    let k_cols = if unit_rank == d { vec![] } else { integer_kernel(&prod)? };
    let k = IntMatrix::from_columns(d, &k_cols);
    let s = k_cols.len();
    let mut c_cols = Vec::with_capacity(s);
    for col in &k_cols {
        match coordinates(&k, &a.mul_vec(col))? {
            Some(c) => c_cols.push(c),
            None => return Ok(Identification::NotIdentified("non-unit part is not invariant".into())),
        }
    }
    let c = IntMatrix::from_columns(s, &c_cols);
    let t = IntMatrix::from_columns(s, &eigen_columns(&c, &spectrum, |x| !is_unit(x))?);
    let det_t = t.determinant();
    if t.cols() != s || det_t == 0 {
        return Ok(Identification::NotIdentified("eigenvectors do not span the non-unit part".into()));
    }
    let index = det_t.unsigned_abs();
    // adj(T)·C^k ≡ 0 (mod det T) means T⁻¹C^k is integral.
    let modulus = det_t.abs();
    let mut m = t.adjugate();
    let mut power = None;
    for p in 0..=MAX_POWER {
        if (0..s).all(|i| (0..s).all(|j| m[(i, j)].rem_euclid(modulus) == 0)) {
            power = Some(p);
            break;
        }
        m = &m * &c;
        for i in 0..s {
            for j in 0..s {
                m[(i, j)] = m[(i, j)].rem_euclid(modulus);
            }
        }
    }
    let Some(power) = power else {
        return Ok(Identification::NotIdentified(format!(
            "no power up to {MAX_POWER} maps the non-unit lattice into its eigen-lattice (index {index})"
        )));
    };
    let eigen_primes: Vec<u128> = spectrum
        .iter()
        .filter(|(x, _)| !is_unit(*x))
        .flat_map(|(x, _)| primes(x.unsigned_abs()))
        .collect();
    let index_on_eigen_primes = primes(index).iter().all(|p| eigen_primes.contains(p));
    let full = IntMatrix::from_columns(d, &eigen_columns(a, &spectrum, |_| true)?);
    let full_eigen_index = full.determinant().unsigned_abs();

    let mut group = AbelianGroupDescriptor::free(unit_rank);
    for &(lambda, mult) in spectrum.iter().filter(|(x, _)| !is_unit(*x)) {
        group = group.direct_sum(&AbelianGroupDescriptor {
            localized: vec![(lambda.unsigned_abs() as u64, mult)],
            ..Default::default()
        });
    }
    let mut eigenvalues = spectrum;
    eigenvalues.sort();
    Ok(Identification::Identified {
        group,
        certificate: Box::new(LimitCertificate {
            eigenvalues,
            nonunit_lattice: k,
            restricted: c,
            eigen_lattice: t,
            index,
            power,
            index_on_eigen_primes,
            full_eigen_index,
        }),
    })
}

/// Kernel and cokernel of `1 − shift` on the limit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftHomology {
    pub kernel: AbelianGroupDescriptor,
    pub cokernel: AbelianGroupDescriptor,
    /// Whether the map induced by `A` on `coker(A − I)` was certified to be an
    /// automorphism directly; otherwise the torsion was taken from the stable
    /// image.
    pub certified: bool,
}

const MAX_STAGES: usize = 64;

/// `1 − shift` acts stage-wise as `v ↦ (A − I)v`. Its kernel is
/// `ker(A − I) ≅ ℤ^nullity`; its cokernel is the limit of `coker(A − I)` under
/// the map induced by `A`, which is `coker(A − I)` itself when that map is an
/// automorphism.
pub fn one_minus_shift(l: &StationaryLimit) -> Result<ShiftHomology> {
    let a = l.matrix();
    let d = a.rows();
    if d == 0 {
        return Ok(ShiftHomology {
            kernel: AbelianGroupDescriptor::trivial(),
            cokernel: AbelianGroupDescriptor::trivial(),
            certified: true,
        });
    }
    let b = a.minus_scalar(1);
    let snf = smith_normal_form(&b)?;
    let diag = snf.diagonal();
    let kernel = AbelianGroupDescriptor::free(d - snf.rank());

    // Induced map in the coordinates w = U·v, where the image is D·ℤᵈ.
    let induced = &(&snf.u * a) * &snf.u_inv;
    let tors: Vec<usize> = (0..d).filter(|&i| diag[i] >= 2).collect();
    let free: Vec<usize> = (0..d).filter(|&i| diag[i] == 0).collect();

    let free_block = induced.select(&free, &free);
    if free_block.determinant().abs() != 1 {
        return Err(Error::NotStabilized { stages: MAX_STAGES });
    }
    let orders: Vec<i128> = tors.iter().map(|&i| diag[i]).collect();
    let t_block = induced.select(&tors, &tors);
    let dt = IntMatrix::diagonal(&orders);
    let surjective = smith_normal_form(&t_block.hcat(&dt))?.diagonal().iter().all(|&x| x == 1);
    if surjective {
        return Ok(ShiftHomology {
            kernel,
            cokernel: AbelianGroupDescriptor::from_orders(free.len(), &orders),
            certified: true,
        });
    }
    let torsion = stable_image(&t_block, &orders)?;
    Ok(ShiftHomology {
        kernel,
        cokernel: AbelianGroupDescriptor::from_orders(free.len(), &torsion),
        certified: false,
    })
}

/// Invariant factors of the eventual image of `φ` on `⨁ ℤ/dᵢ`.
fn stable_image(phi: &IntMatrix, orders: &[i128]) -> Result<Vec<i128>> {
    let t = orders.len();
    let dt = IntMatrix::diagonal(orders);
    let image_factors = |m: &IntMatrix| -> Result<Vec<i128>> {
        // L = span(M, D); the image is L / Dℤᵗ.
        let s = smith_normal_form(&m.hcat(&dt))?;
        let basis = &s.u_inv * &IntMatrix::diagonal(&s.diagonal()[..t]);
        let mut coords = Vec::with_capacity(t);
        for j in 0..t {
            coords.push(
                coordinates(&basis, &dt.column(j))?
                    .ok_or_else(|| Error::Inconsistent("D must lie in span(M, D)".into()))?,
            );
        }
        Ok(smith_normal_form(&IntMatrix::from_columns(t, &coords))?.diagonal())
    };
    let order = |f: &[i128]| -> i128 { f.iter().product() };
    let mut m = phi.clone();
    let mut prev = image_factors(&m)?;
    for _ in 0..MAX_STAGES {
        m = &m * phi;
        for i in 0..t {
            for j in 0..t {
                m[(i, j)] = m[(i, j)].rem_euclid(orders[i]);
            }
        }
        let next = image_factors(&m)?;
        if order(&next) == order(&prev) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::NotStabilized { stages: MAX_STAGES })
}
