//! Groups with an injective finite-index endomorphism.
//!
//! Three families are built in:
//!
//! * `ℤ` with `α(x) = N·x`,
//! * the infinite dihedral group `ℤ₂ ∗ ℤ₂ = ⟨a, b | a² = b² = 1⟩` with
//!   `α(a) = aba`, `α(b) = bab`,
//! * the restricted direct power `⊕ ℤ_m` with the shift
//!   `α(a₁, a₂, …) = (0, a₁, a₂, …)`.
//!
//! Every family supplies a canonical form, the group law, `α`, a length
//! function and an exact preimage `α⁻¹` on the image. Level-1 decompositions
//! `x = α(g)·r` are built on top of the preimage (see [`crate::transversal`]).

use std::collections::HashMap;
use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on enumerated set sizes.
pub const DEFAULT_CAP: u128 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Letter {
    A,
    B,
}

impl Letter {
    fn other(self) -> Letter {
        match self {
            Letter::A => Letter::B,
            Letter::B => Letter::A,
        }
    }

    fn as_char(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::B => 'b',
        }
    }
}

/// A reduced word in `ℤ₂ ∗ ℤ₂`.
///
/// Reduced words alternate between `a` and `b`, so the first letter and the
/// length determine the word. The identity has length 0 and first letter `A`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DihedralWord {
    len: u64,
    first: Letter,
}

impl DihedralWord {
    pub const IDENTITY: DihedralWord = DihedralWord { len: 0, first: Letter::A };

    pub fn new(first: Letter, len: u64) -> Self {
        if len == 0 {
            Self::IDENTITY
        } else {
            DihedralWord { len, first }
        }
    }

    pub fn letter(l: Letter) -> Self {
        DihedralWord { len: 1, first: l }
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn first(&self) -> Option<Letter> {
        (self.len > 0).then_some(self.first)
    }

    fn letter_at(&self, i: u64) -> Letter {
        if i.is_multiple_of(2) {
            self.first
        } else {
            self.first.other()
        }
    }

    pub fn last(&self) -> Option<Letter> {
        (self.len > 0).then(|| self.letter_at(self.len - 1))
    }

    pub fn mul(&self, other: &DihedralWord) -> DihedralWord {
        if self.len == 0 {
            return *other;
        }
        if other.len == 0 {
            return *self;
        }
        if self.last() != other.first() {
            return DihedralWord::new(self.first, self.len + other.len);
        }
        // The junction cancels, and keeps cancelling because both words alternate.
        match self.len.cmp(&other.len) {
            std::cmp::Ordering::Greater => DihedralWord::new(self.first, self.len - other.len),
            std::cmp::Ordering::Less => {
                DihedralWord::new(other.letter_at(self.len), other.len - self.len)
            }
            std::cmp::Ordering::Equal => Self::IDENTITY,
        }
    }

    pub fn inverse(&self) -> DihedralWord {
        match self.last() {
            Some(l) => DihedralWord::new(l, self.len),
            None => Self::IDENTITY,
        }
    }

    /// Reduce an arbitrary string over `{a, b, e}`; `e` is the empty word.
    pub fn parse(raw: &str) -> Result<Self> {
        let raw = raw.trim();
        let mut acc = Self::IDENTITY;
        for ch in raw.chars() {
            let l = match ch {
                'a' => Letter::A,
                'b' => Letter::B,
                'e' | '1' => continue,
                other => {
                    return Err(Error::Malformed { token: other.to_string() });
                }
            };
            acc = acc.mul(&DihedralWord::letter(l));
        }
        Ok(acc)
    }
}

impl fmt::Display for DihedralWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len == 0 {
            return f.write_str("e");
        }
        for i in 0..self.len {
            write!(f, "{}", self.letter_at(i).as_char())?;
        }
        Ok(())
    }
}

/// A finitely supported tuple over `ℤ_m`, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ShiftTuple {
    modulus: u32,
    entries: Vec<u32>,
}

impl ShiftTuple {
    pub fn new(modulus: u32, mut entries: Vec<u32>) -> Result<Self> {
        if let Some(bad) = entries.iter().find(|&&e| e >= modulus) {
            return Err(Error::Malformed { token: bad.to_string() });
        }
        while entries.last() == Some(&0) {
            entries.pop();
        }
        Ok(ShiftTuple { modulus, entries })
    }

    fn from_reduced(modulus: u32, mut entries: Vec<u32>) -> Self {
        while entries.last() == Some(&0) {
            entries.pop();
        }
        ShiftTuple { modulus, entries }
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn width(&self) -> usize {
        self.entries.len()
    }

    fn add(&self, other: &ShiftTuple) -> ShiftTuple {
        let w = self.entries.len().max(other.entries.len());
        let m = self.modulus;
        let entries = (0..w)
            .map(|i| {
                let a = self.entries.get(i).copied().unwrap_or(0);
                let b = other.entries.get(i).copied().unwrap_or(0);
                (a + b) % m
            })
            .collect();
        ShiftTuple::from_reduced(m, entries)
    }

    fn negate(&self) -> ShiftTuple {
        let m = self.modulus;
        let entries = self.entries.iter().map(|&e| (m - e) % m).collect();
        ShiftTuple::from_reduced(m, entries)
    }

    pub fn parse(modulus: u32, raw: &str) -> Result<Self> {
        let raw = raw.trim();
        let inner = raw
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| Error::Malformed { token: raw.to_string() })?;
        if inner.trim().is_empty() {
            return Ok(ShiftTuple { modulus, entries: vec![] });
        }
        let mut entries = Vec::new();
        for tok in inner.split(',') {
            let tok = tok.trim();
            let v: u32 = tok.parse().map_err(|_| Error::Malformed { token: tok.to_string() })?;
            if v >= modulus {
                return Err(Error::Malformed { token: tok.to_string() });
            }
            entries.push(v);
        }
        ShiftTuple::new(modulus, entries)
    }
}

impl fmt::Display for ShiftTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str(")")
    }
}

/// An element of one of the supported groups, always in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElement {
    Int(i64),
    Dihedral(DihedralWord),
    Shift(ShiftTuple),
}

impl GroupElement {
    pub fn try_mul(&self, other: &GroupElement) -> Result<GroupElement> {
        match (self, other) {
            (GroupElement::Int(a), GroupElement::Int(b)) => a
                .checked_add(*b)
                .map(GroupElement::Int)
                .ok_or_else(|| Error::Precondition("integer overflow".into())),
            (GroupElement::Dihedral(a), GroupElement::Dihedral(b)) => {
                Ok(GroupElement::Dihedral(a.mul(b)))
            }
            (GroupElement::Shift(a), GroupElement::Shift(b)) if a.modulus == b.modulus => {
                Ok(GroupElement::Shift(a.add(b)))
            }
            _ => Err(Error::FamilyMismatch { left: self.family_name(), right: other.family_name() }),
        }
    }

    pub fn inverse(&self) -> GroupElement {
        match self {
            GroupElement::Int(a) => GroupElement::Int(-a),
            GroupElement::Dihedral(w) => GroupElement::Dihedral(w.inverse()),
            GroupElement::Shift(t) => GroupElement::Shift(t.negate()),
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            GroupElement::Int(a) => *a == 0,
            GroupElement::Dihedral(w) => w.is_empty(),
            GroupElement::Shift(t) => t.entries.is_empty(),
        }
    }

    /// Word length: `|x|` for ℤ, letter count for the dihedral group, support
    /// width for shift tuples.
    pub fn length(&self) -> u64 {
        match self {
            GroupElement::Int(a) => a.unsigned_abs(),
            GroupElement::Dihedral(w) => w.len(),
            GroupElement::Shift(t) => t.width() as u64,
        }
    }

    fn family_name(&self) -> String {
        match self {
            GroupElement::Int(_) => "integer".into(),
            GroupElement::Dihedral(_) => "dihedral".into(),
            GroupElement::Shift(t) => format!("shift(Z_{})", t.modulus),
        }
    }

    /// Conjugate `g·self·g⁻¹`.
    pub fn conjugate_by(&self, g: &GroupElement) -> GroupElement {
        &(g * self) * &g.inverse()
    }
}

/// Panics on a family mismatch; use [`GroupElement::try_mul`] at API boundaries.
impl Mul for &GroupElement {
    type Output = GroupElement;

    fn mul(self, rhs: &GroupElement) -> GroupElement {
        self.try_mul(rhs).expect("group elements from different families")
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Int(a) => write!(f, "{a}"),
            GroupElement::Dihedral(w) => write!(f, "{w}"),
            GroupElement::Shift(t) => write!(f, "{t}"),
        }
    }
}

/// Group family together with the parameters of its endomorphism.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Family {
    /// `ℤ` with `α(x) = multiplier·x`.
    Integer { multiplier: i64 },
    /// `ℤ₂ ∗ ℤ₂` with `α(a) = aba`, `α(b) = bab`.
    Dihedral,
    /// `⊕ ℤ_modulus` with the shift `α(t) = (0, t)`.
    Shift { modulus: u32 },
}

impl Family {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Family::Integer { multiplier } if multiplier < 2 => {
                Err(Error::InvalidInput(format!("multiplier must be >= 2, got {multiplier}")))
            }
            Family::Shift { modulus } if modulus < 2 => {
                Err(Error::InvalidInput(format!("modulus must be >= 2, got {modulus}")))
            }
            _ => Ok(()),
        }
    }

    pub fn identity(&self) -> GroupElement {
        match *self {
            Family::Integer { .. } => GroupElement::Int(0),
            Family::Dihedral => GroupElement::Dihedral(DihedralWord::IDENTITY),
            Family::Shift { modulus } => GroupElement::Shift(ShiftTuple { modulus, entries: vec![] }),
        }
    }

    /// `[G : α(G)]`.
    pub fn index(&self) -> usize {
        match *self {
            Family::Integer { multiplier } => multiplier as usize,
            Family::Dihedral => 3,
            Family::Shift { modulus } => modulus as usize,
        }
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        match (self, x) {
            (Family::Integer { .. }, GroupElement::Int(_)) => true,
            (Family::Dihedral, GroupElement::Dihedral(_)) => true,
            (Family::Shift { modulus }, GroupElement::Shift(t)) => t.modulus == *modulus,
            _ => false,
        }
    }

    pub fn check(&self, x: &GroupElement) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::FamilyMismatch { left: self.to_string(), right: x.family_name() })
        }
    }

    /// Parse the text syntax of an element and return its canonical form.
    pub fn parse(&self, raw: &str) -> Result<GroupElement> {
        let raw = raw.trim();
        match *self {
            Family::Integer { .. } => {
                let body = raw.strip_prefix('+').unwrap_or(raw);
                body.parse::<i64>()
                    .map(GroupElement::Int)
                    .map_err(|_| Error::Malformed { token: raw.to_string() })
            }
            Family::Dihedral => DihedralWord::parse(raw).map(GroupElement::Dihedral),
            Family::Shift { modulus } => ShiftTuple::parse(modulus, raw).map(GroupElement::Shift),
        }
    }

    pub fn apply(&self, x: &GroupElement) -> GroupElement {
        match (self, x) {
            (Family::Integer { multiplier }, GroupElement::Int(a)) => GroupElement::Int(
                a.checked_mul(*multiplier).expect("integer overflow applying the endomorphism"),
            ),
            (Family::Dihedral, GroupElement::Dihedral(w)) => {
                // Images of consecutive letters never cancel: aba·bab, bab·aba.
                GroupElement::Dihedral(DihedralWord::new(w.first, 3 * w.len))
            }
            (Family::Shift { .. }, GroupElement::Shift(t)) => {
                if t.entries.is_empty() {
                    x.clone()
                } else {
                    let mut entries = Vec::with_capacity(t.entries.len() + 1);
                    entries.push(0);
                    entries.extend_from_slice(&t.entries);
                    GroupElement::Shift(ShiftTuple { modulus: t.modulus, entries })
                }
            }
            _ => panic!("element {x} does not belong to family {self}"),
        }
    }

    /// `α⁻¹(x)` when `x ∈ α(G)`.
    pub fn preimage(&self, x: &GroupElement) -> Option<GroupElement> {
        match (self, x) {
            (Family::Integer { multiplier }, GroupElement::Int(a)) => {
                (a % multiplier == 0).then(|| GroupElement::Int(a / multiplier))
            }
            (Family::Dihedral, GroupElement::Dihedral(w)) => {
                (w.len % 3 == 0).then(|| GroupElement::Dihedral(DihedralWord::new(w.first, w.len / 3)))
            }
            (Family::Shift { .. }, GroupElement::Shift(t)) => match t.entries.first() {
                None => Some(x.clone()),
                Some(0) => Some(GroupElement::Shift(ShiftTuple {
                    modulus: t.modulus,
                    entries: t.entries[1..].to_vec(),
                })),
                Some(_) => None,
            },
            _ => None,
        }
    }

    /// A generating set; for the shift family the coordinate generators of
    /// width at most `width` (at least one).
    pub fn generators(&self, width: usize) -> Vec<GroupElement> {
        match *self {
            Family::Integer { .. } => vec![GroupElement::Int(1)],
            Family::Dihedral => vec![
                GroupElement::Dihedral(DihedralWord::letter(Letter::A)),
                GroupElement::Dihedral(DihedralWord::letter(Letter::B)),
            ],
            Family::Shift { modulus } => (0..width.max(1))
                .map(|i| {
                    let mut entries = vec![0; i + 1];
                    entries[i] = 1;
                    GroupElement::Shift(ShiftTuple { modulus, entries })
                })
                .collect(),
        }
    }

    pub fn ball_size(&self, radius: u64) -> Option<u128> {
        match *self {
            Family::Integer { .. } | Family::Dihedral => Some(2 * radius as u128 + 1),
            Family::Shift { modulus } => (modulus as u128).checked_pow(u32::try_from(radius).ok()?),
        }
    }

    /// All elements of length at most `radius`, ordered by length.
    pub fn ball(&self, radius: u64, cap: u128) -> Result<Vec<GroupElement>> {
        let size = self.ball_size(radius).unwrap_or(u128::MAX);
        if size > cap {
            return Err(Error::CapExceeded { required: size, cap });
        }
        let mut out = Vec::with_capacity(size as usize);
        match *self {
            Family::Integer { .. } => {
                let r = radius as i64;
                out.extend((-r..=r).map(GroupElement::Int));
            }
            Family::Dihedral => {
                out.push(self.identity());
                for len in 1..=radius {
                    out.push(GroupElement::Dihedral(DihedralWord::new(Letter::A, len)));
                    out.push(GroupElement::Dihedral(DihedralWord::new(Letter::B, len)));
                }
            }
            Family::Shift { modulus } => {
                out.push(self.identity());
                let m = modulus as usize;
                for width in 1..=radius as usize {
                    let prefixes = m.pow(width as u32 - 1);
                    for last in 1..m {
                        for p in 0..prefixes {
                            let mut entries = Vec::with_capacity(width);
                            let mut q = p;
                            for _ in 0..width - 1 {
                                entries.push((q % m) as u32);
                                q /= m;
                            }
                            entries.push(last as u32);
                            out.push(GroupElement::Shift(ShiftTuple { modulus, entries }));
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Integer { multiplier } => write!(f, "integer(N={multiplier})"),
            Family::Dihedral => f.write_str("dihedral"),
            Family::Shift { modulus } => write!(f, "shift(Z_{modulus})"),
        }
    }
}

/// A family, its endomorphism and a chosen transversal `R₁` of `α(G)\G`.
#[derive(Clone, Debug)]
pub struct Endomorphism {
    family: Family,
    r1: Vec<GroupElement>,
    identity_digit: usize,
    digit_of: HashMap<GroupElement, usize>,
}

impl PartialEq for Endomorphism {
    fn eq(&self, other: &Self) -> bool {
        self.family == other.family && self.r1 == other.r1
    }
}

impl Endomorphism {
    /// The endomorphism with its default transversal: `{0..N-1}`, `{e, a, b}`,
    /// or `{(h) : h ∈ ℤ_m}`.
    pub fn new(family: Family) -> Result<Self> {
        family.validate()?;
        let r1 = match family {
            Family::Integer { multiplier } => (0..multiplier).map(GroupElement::Int).collect(),
            Family::Dihedral => vec![
                family.identity(),
                GroupElement::Dihedral(DihedralWord::letter(Letter::A)),
                GroupElement::Dihedral(DihedralWord::letter(Letter::B)),
            ],
            Family::Shift { modulus } => (0..modulus)
                .map(|h| GroupElement::Shift(ShiftTuple::from_reduced(modulus, vec![h])))
                .collect(),
        };
        Self::with_transversal(family, r1)
    }

    pub fn integer(multiplier: i64) -> Result<Self> {
        Self::new(Family::Integer { multiplier })
    }

    pub fn dihedral() -> Self {
        Self::new(Family::Dihedral).expect("dihedral defaults are valid")
    }

    pub fn shift(modulus: u32) -> Result<Self> {
        Self::new(Family::Shift { modulus })
    }

    /// Use a custom `R₁`. It must contain the identity, have `[G:α(G)]`
    /// elements, and meet every right coset of `α(G)` once.
    pub fn with_transversal(family: Family, r1: Vec<GroupElement>) -> Result<Self> {
        family.validate()?;
        for r in &r1 {
            family.check(r)?;
        }
        if r1.len() != family.index() {
            return Err(Error::InvalidInput(format!(
                "transversal has {} elements but the index is {}",
                r1.len(),
                family.index()
            )));
        }
        let identity_digit = r1
            .iter()
            .position(GroupElement::is_identity)
            .ok_or_else(|| Error::InvalidInput("transversal must contain the identity".into()))?;
        for (i, r) in r1.iter().enumerate() {
            for s in &r1[i + 1..] {
                if family.preimage(&(s * &r.inverse())).is_some() {
                    return Err(Error::InvalidInput(format!(
                        "{r} and {s} lie in the same right coset"
                    )));
                }
            }
        }
        let digit_of = r1.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
        Ok(Endomorphism { family, r1, identity_digit, digit_of })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn transversal(&self) -> &[GroupElement] {
        &self.r1
    }

    pub fn base(&self) -> usize {
        self.r1.len()
    }

    pub fn identity_digit(&self) -> usize {
        self.identity_digit
    }

    pub fn digit_of(&self, r: &GroupElement) -> Option<usize> {
        self.digit_of.get(r).copied()
    }

    pub fn identity(&self) -> GroupElement {
        self.family.identity()
    }

    pub fn parse(&self, raw: &str) -> Result<GroupElement> {
        self.family.parse(raw)
    }

    pub fn multiply(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
        self.family.check(x)?;
        x.try_mul(y)
    }

    pub fn alpha(&self, x: &GroupElement) -> GroupElement {
        self.family.apply(x)
    }

    /// `αⁿ(x)`.
    pub fn alpha_n(&self, x: &GroupElement, n: usize) -> GroupElement {
        match (self.family, x) {
            (Family::Integer { multiplier }, GroupElement::Int(a)) => {
                let factor = multiplier
                    .checked_pow(n as u32)
                    .expect("integer overflow applying the endomorphism");
                GroupElement::Int(a.checked_mul(factor).expect("integer overflow"))
            }
            (Family::Dihedral, GroupElement::Dihedral(w)) => {
                GroupElement::Dihedral(DihedralWord::new(w.first, w.len * 3u64.pow(n as u32)))
            }
            _ => (0..n).fold(x.clone(), |acc, _| self.family.apply(&acc)),
        }
    }

    /// `αⁿ(x)` with family checking; the public form of [`Self::alpha_n`].
    pub fn apply_endo(&self, x: &GroupElement, n: usize) -> Result<GroupElement> {
        self.family.check(x)?;
        Ok(self.alpha_n(x, n))
    }

    pub fn preimage(&self, x: &GroupElement) -> Option<GroupElement> {
        self.family.preimage(x)
    }

    pub fn ball(&self, radius: u64, cap: u128) -> Result<Vec<GroupElement>> {
        self.family.ball(radius, cap)
    }

    /// Stable text description used for cache keys.
    pub fn canonical_string(&self) -> String {
        let reps: Vec<String> = self.r1.iter().map(ToString::to_string).collect();
        format!("{};R1=[{}]", self.family, reps.join(","))
    }
}
