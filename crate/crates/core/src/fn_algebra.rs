//! Matrix model of the level-`n` building blocks `𝔽ₙ ≅ M_{|Rₙ|}(ℂG)`.
//!
//! The triple `(x,k,y)ₙ = δ_{x·αⁿ(k)} Pₙ δ_y` with `x⁻¹, y ∈ Rₙ` is stored as
//! the entry `δ_k` at row `x⁻¹`, column `y`, where `Pₙ = SⁿS*ⁿ`. Rows and
//! columns follow transversal order.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::group::{Endomorphism, GroupElement};
use crate::ring::{coeff, Coeff, GroupRingElement};
use crate::transversal::{checked_size, digits_of_index, index_of_digits};

/// Largest level whose matrices are materialized.
pub const MAX_DIM: u128 = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FnElement {
    level: usize,
    dim: usize,
    entries: BTreeMap<(usize, usize), GroupRingElement>,
}

impl FnElement {
    pub fn zero(endo: &Endomorphism, level: usize) -> Result<Self> {
        let dim = checked_size(endo.base(), level, MAX_DIM)?;
        Ok(FnElement { level, dim, entries: BTreeMap::new() })
    }

    pub fn identity(endo: &Endomorphism, level: usize) -> Result<Self> {
        let mut out = Self::zero(endo, level)?;
        for i in 0..out.dim {
            out.entries.insert((i, i), GroupRingElement::one(endo.family()));
        }
        Ok(out)
    }

    /// A level-0 element is just a group-ring element.
    pub fn from_ring(a: GroupRingElement) -> Self {
        let mut entries = BTreeMap::new();
        if !a.is_zero() {
            entries.insert((0, 0), a);
        }
        FnElement { level: 0, dim: 1, entries }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entry(&self, row: usize, col: usize) -> GroupRingElement {
        self.entries.get(&(row, col)).cloned().unwrap_or_default()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &GroupRingElement)> {
        self.entries.iter()
    }

    pub fn add_entry(&mut self, row: usize, col: usize, a: &GroupRingElement) {
        if a.is_zero() {
            return;
        }
        let slot = self.entries.entry((row, col)).or_default();
        *slot = &*slot + a;
        if slot.is_zero() {
            self.entries.remove(&(row, col));
        }
    }

    fn check_level(&self, other: &Self) -> Result<()> {
        if self.level != other.level {
            return Err(Error::LevelMismatch { left: self.level, right: other.level });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_level(other)?;
        let mut out = self.clone();
        for (&(i, j), a) in &other.entries {
            out.add_entry(i, j, a);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-coeff(1)))
    }

    pub fn scale(&self, c: Coeff) -> Self {
        let mut out = FnElement { level: self.level, dim: self.dim, entries: BTreeMap::new() };
        if c.is_zero() {
            return out;
        }
        for (&k, a) in &self.entries {
            out.entries.insert(k, a.scale(c));
        }
        out
    }

    /// Matrix product over the group ring.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_level(other)?;
        let mut by_row: BTreeMap<usize, Vec<(usize, &GroupRingElement)>> = BTreeMap::new();
        for (&(k, j), b) in &other.entries {
            by_row.entry(k).or_default().push((j, b));
        }
        let mut out = FnElement { level: self.level, dim: self.dim, entries: BTreeMap::new() };
        for (&(i, k), a) in &self.entries {
            if let Some(row) = by_row.get(&k) {
                for &(j, b) in row {
                    out.add_entry(i, j, &a.try_mul(b)?);
                }
            }
        }
        Ok(out)
    }

    /// Conjugate transpose with the group-ring involution on entries.
    pub fn adjoint(&self) -> Self {
        FnElement {
            level: self.level,
            dim: self.dim,
            entries: self.entries.iter().map(|(&(i, j), a)| ((j, i), a.adjoint())).collect(),
        }
    }

    /// `E_{𝒜ₙ}`: keep the diagonal and replace each entry by `tr(entry)·1`.
    pub fn expect_an(&self, endo: &Endomorphism) -> Self {
        let mut out = FnElement { level: self.level, dim: self.dim, entries: BTreeMap::new() };
        for (&(i, j), a) in &self.entries {
            if i == j {
                out.add_entry(i, i, &GroupRingElement::scalar(endo.family(), a.trace()));
            }
        }
        out
    }

    /// Rows of the matrix as strings, e.g. `[[0,1],[z,0]]`.
    pub fn to_matrix_string(&self) -> String {
        let rows: Vec<String> = (0..self.dim)
            .map(|i| {
                let cells: Vec<String> = (0..self.dim).map(|j| self.entry(i, j).to_string()).collect();
                format!("[{}]", cells.join(","))
            })
            .collect();
        format!("[{}]", rows.join(","))
    }
}

impl fmt::Display for FnElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_matrix_string())
    }
}

/// The representatives of `Rₙ` in transversal order.
pub fn level_reps(endo: &Endomorphism, n: usize) -> Result<Vec<GroupElement>> {
    let size = checked_size(endo.base(), n, MAX_DIM)?;
    Ok((0..size)
        .map(|i| endo.element_from_digits(&digits_of_index(i, endo.base(), n)))
        .collect())
}

/// Canonical form of `δᵤ Pₙ δᵥ` as a single-entry matrix.
pub fn triple_make(endo: &Endomorphism, u: &GroupElement, n: usize, v: &GroupElement) -> Result<FnElement> {
    let (row, col, k) = triple_position(endo, u, n, v)?;
    let mut out = FnElement::zero(endo, n)?;
    out.add_entry(row, col, &GroupRingElement::delta(k));
    Ok(out)
}

/// Row, column and group-ring entry of `δᵤ Pₙ δᵥ`.
///
/// `v = αⁿ(g)·r` and `δ_{αⁿ(g)}` commutes with `Pₙ`; then
/// `(u·αⁿ(g))⁻¹ = αⁿ(k⁻¹)·x⁻¹` fixes the row `x⁻¹ ∈ Rₙ` and the entry `δ_k`.
pub fn triple_position(
    endo: &Endomorphism,
    u: &GroupElement,
    n: usize,
    v: &GroupElement,
) -> Result<(usize, usize, GroupElement)> {
    let dv = endo.decompose(v, n)?;
    let left = endo.multiply(u, &endo.alpha_n(&dv.quotient, n))?;
    let du = endo.decompose(&left.inverse(), n)?;
    let base = endo.base();
    Ok((index_of_digits(&du.digits, base), index_of_digits(&dv.digits, base), du.quotient.inverse()))
}

/// `ι : 𝔽ₙ → 𝔽ₙ₊₁`, through `Pₙ = Σ_{r∈R₁} δ_{αⁿ(r)⁻¹} Pₙ₊₁ δ_{αⁿ(r)}`.
pub fn iota(endo: &Endomorphism, a: &FnElement) -> Result<FnElement> {
    let n = a.level;
    let reps = level_reps(endo, n)?;
    let shifted: Vec<GroupElement> = endo.transversal().iter().map(|r| endo.alpha_n(r, n)).collect();
    let mut out = FnElement::zero(endo, n + 1)?;
    for (&(i, j), entry) in &a.entries {
        let x = reps[i].inverse();
        let y = &reps[j];
        for (k, c) in entry.terms() {
            let u0 = &x * &endo.alpha_n(k, n);
            for s in &shifted {
                let (row, col, g) = triple_position(endo, &(&u0 * &s.inverse()), n + 1, &(s * y))?;
                out.add_entry(row, col, &GroupRingElement::term(g, *c));
            }
        }
    }
    Ok(out)
}

/// `ι` written out as `Σ_q (x·αⁿ(q), p, αⁿ(s)·y)ₙ₊₁` over `q ∈ R₁⁻¹`, where
/// `α(p)·s = q⁻¹·k` and `s ∈ R₁`.
pub fn iota_closed_form(endo: &Endomorphism, a: &FnElement) -> Result<FnElement> {
    let n = a.level;
    let base = endo.base();
    let mut out = FnElement::zero(endo, n + 1)?;
    for (&(i, j), entry) in &a.entries {
        let row_digits = digits_of_index(i, base, n);
        let col_digits = digits_of_index(j, base, n);
        for (k, c) in entry.terms() {
            for (qd, qinv) in endo.transversal().iter().enumerate() {
                let (p, s) = endo.level1_decompose(&(qinv * k))?;
                let mut rd = row_digits.clone();
                rd.push(qd);
                let mut cd = col_digits.clone();
                cd.push(s);
                out.add_entry(
                    index_of_digits(&rd, base),
                    index_of_digits(&cd, base),
                    &GroupRingElement::term(p, *c),
                );
            }
        }
    }
    Ok(out)
}

/// `ι` as `ι₀ ⊗ id`: the level-`n` matrix unit tensored with `ι₀` of its
/// entry, the new digit being the most significant one.
pub fn iota_tensor(endo: &Endomorphism, a: &FnElement) -> Result<FnElement> {
    let n = a.level;
    let stride = a.dim;
    let mut out = FnElement::zero(endo, n + 1)?;
    for (&(i, j), entry) in &a.entries {
        let block = iota(endo, &FnElement::from_ring(entry.clone()))?;
        for (&(bi, bj), e) in &block.entries {
            out.add_entry(i + stride * bi, j + stride * bj, e);
        }
    }
    Ok(out)
}

/// Apply `ι` repeatedly until `a` lives at `level`.
pub fn iota_to(endo: &Endomorphism, a: &FnElement, level: usize) -> Result<FnElement> {
    if level < a.level {
        return Err(Error::LevelMismatch { left: a.level, right: level });
    }
    let mut cur = a.clone();
    while cur.level < level {
        cur = iota(endo, &cur)?;
    }
    Ok(cur)
}

/// `α*(a)`, with coefficient `â(α(g))` at `g`.
pub fn alpha_star(endo: &Endomorphism, a: &GroupRingElement) -> GroupRingElement {
    let mut out = GroupRingElement::zero();
    for (h, c) in a.terms() {
        if let Some(g) = endo.preimage(h) {
            out.add_term(g, *c);
        }
    }
    out
}

/// Least `m ≤ max_m` with `α*ᵐ(a) = 0`.
pub fn alpha_star_decay(endo: &Endomorphism, a: &GroupRingElement, max_m: usize) -> Result<Option<usize>> {
    if !a.trace().is_zero() {
        return Err(Error::Precondition("alpha-star decay needs a trace-zero element".into()));
    }
    let mut cur = a.clone();
    for m in 0..=max_m {
        if cur.is_zero() {
            return Ok(Some(m));
        }
        cur = alpha_star(endo, &cur);
    }
    Ok(None)
}

/// Whether `P₁·ι(a)·P₁ = α*(a)·P₁`, i.e. the identity-identity corner of
/// `ι(a)` is `α*(a)` and nothing else survives the compression.
pub fn corner_compression_check(endo: &Endomorphism, a: &GroupRingElement) -> Result<bool> {
    let lifted = iota(endo, &FnElement::from_ring(a.clone()))?;
    let p1 = triple_make(endo, &endo.identity(), 1, &endo.identity())?;
    let compressed = p1.mul(&lifted)?.mul(&p1)?;
    let id = endo.identity_digit();
    let mut expected = FnElement::zero(endo, 1)?;
    expected.add_entry(id, id, &alpha_star(endo, a));
    Ok(compressed == expected)
}

/// Determinant over a commutative group ring (cofactor expansion).
pub fn determinant(a: &FnElement) -> Result<GroupRingElement> {
    for (_, e) in a.entries() {
        if e.support().any(|g| !matches!(g, GroupElement::Int(_))) {
            return Err(Error::Precondition("determinant needs a commutative group".into()));
        }
    }
    let cols: Vec<usize> = (0..a.dim).collect();
    Ok(det_rec(a, 0, &cols))
}

fn det_rec(a: &FnElement, row: usize, cols: &[usize]) -> GroupRingElement {
    if cols.is_empty() {
        return GroupRingElement::delta(GroupElement::Int(0));
    }
    let mut acc = GroupRingElement::zero();
    for (pos, &c) in cols.iter().enumerate() {
        let e = a.entry(row, c);
        if e.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let minor = det_rec(a, row + 1, &rest);
        let term = &e * &minor;
        acc = if pos % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}
