//! Normal forms for the *-algebra spanned by words in `S`, `S*` and `δₓ`.
//!
//! Every word reduces to a sum of monomials `δₓ Sᵃ S*ᵇ δ_r` with `r ∈ R_b`.
//! Two monomials multiply in closed form because the middle block
//! `S*ᵇ δ_u Sᶜ` collapses through `S*δ_wS = [w ∈ α(G)]·δ_{α⁻¹(w)}`. The
//! remaining redundancy is
//!
//! ```text
//! δₓ Sᵃ S*ᵇ δ_r = Σ_{q∈R₁} δ_{x·αᵃ(q⁻¹)} Sᵃ⁺¹ S*ᵇ⁺¹ δ_{αᵇ(q)·r},
//! ```
//!
//! which [`NormalWord::canonicalize`] resolves by lifting each weight class
//! to a common level and collapsing complete sibling families.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fn_algebra::{iota_to, triple_make, FnElement};
use crate::group::{Endomorphism, Family, GroupElement};
use crate::ring::{coeff, fmt_coeff, Coeff};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    S,
    SStar,
    Delta(GroupElement),
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::S => f.write_str("S"),
            Letter::SStar => f.write_str("S*"),
            Letter::Delta(x) => write!(f, "d({x})"),
        }
    }
}

/// Whitespace-separated `S`, `S*`, `d(x)`.
pub fn parse_letters(family: Family, raw: &str) -> Result<Vec<Letter>> {
    raw.split_whitespace()
        .map(|tok| match tok {
            "S" => Ok(Letter::S),
            "S*" => Ok(Letter::SStar),
            _ => tok
                .strip_prefix("d(")
                .and_then(|t| t.strip_suffix(')'))
                .ok_or_else(|| Error::Malformed { token: tok.to_string() })
                .and_then(|inner| family.parse(inner))
                .map(Letter::Delta),
        })
        .collect()
}

pub fn letters_to_string(letters: &[Letter]) -> String {
    letters.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

/// `δₓ Sᵃ S*ᵇ δ_r` with `r ∈ R_b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub x: GroupElement,
    pub a: usize,
    pub b: usize,
    pub r: GroupElement,
}

impl Monomial {
    /// `δₓ Sᵃ S*ᵇ δ_y` with the column moved into `R_b`:
    /// `y = αᵇ(t)·r` gives `δ_{x·αᵃ(t)} Sᵃ S*ᵇ δ_r`.
    pub fn canonical(endo: &Endomorphism, x: GroupElement, a: usize, b: usize, y: &GroupElement) -> Result<Self> {
        let dec = endo.decompose(y, b)?;
        let r = endo.element_from_digits(&dec.digits);
        let x = endo.multiply(&x, &endo.alpha_n(&dec.quotient, a))?;
        Ok(Monomial { x, a, b, r })
    }

    pub fn identity(endo: &Endomorphism) -> Self {
        Monomial { x: endo.identity(), a: 0, b: 0, r: endo.identity() }
    }

    /// The `γ`-weight `a − b`.
    pub fn weight(&self) -> i64 {
        self.a as i64 - self.b as i64
    }

    pub fn is_balanced(&self) -> bool {
        self.a == self.b
    }

    /// `δ_{r⁻¹} Pₐ δ_r`.
    pub fn is_projection(&self) -> bool {
        self.a == self.b && self.x == self.r.inverse()
    }

    pub fn mul(&self, endo: &Endomorphism, other: &Monomial) -> Result<Option<Monomial>> {
        let u = endo.multiply(&self.r, &other.x)?;
        let (b, c) = (self.b, other.a);
        if b <= c {
            let dec = endo.decompose(&u, b)?;
            if dec.digits.iter().any(|&d| d != endo.identity_digit()) {
                return Ok(None);
            }
            let x = endo.multiply(&self.x, &endo.alpha_n(&dec.quotient, self.a))?;
            Ok(Some(Monomial { x, a: self.a + c - b, b: other.b, r: other.r.clone() }))
        } else {
            let dec = endo.decompose(&u, c)?;
            if dec.digits.iter().any(|&d| d != endo.identity_digit()) {
                return Ok(None);
            }
            let col = endo.multiply(&endo.alpha_n(&dec.quotient, other.b), &other.r)?;
            Monomial::canonical(endo, self.x.clone(), self.a, b - c + other.b, &col).map(Some)
        }
    }

    pub fn adjoint(&self, endo: &Endomorphism) -> Result<Monomial> {
        Monomial::canonical(endo, self.r.inverse(), self.b, self.a, &self.x.inverse())
    }

    /// The monomial as a word.
    pub fn letters(&self) -> Vec<Letter> {
        let mut out = vec![Letter::Delta(self.x.clone())];
        out.extend(std::iter::repeat_n(Letter::S, self.a));
        out.extend(std::iter::repeat_n(Letter::SStar, self.b));
        out.push(Letter::Delta(self.r.clone()));
        out
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.x.is_identity() {
            parts.push(format!("d({})", self.x));
        }
        match self.a {
            0 => {}
            1 => parts.push("S".into()),
            a => parts.push(format!("S^{a}")),
        }
        match self.b {
            0 => {}
            1 => parts.push("S*".into()),
            b => parts.push(format!("S*^{b}")),
        }
        if !self.r.is_identity() {
            parts.push(format!("d({})", self.r));
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join(" "))
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NormalWord {
    terms: BTreeMap<Monomial, Coeff>,
}

impl NormalWord {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one(endo: &Endomorphism) -> Self {
        Self::monomial(Monomial::identity(endo), coeff(1))
    }

    pub fn monomial(m: Monomial, c: Coeff) -> Self {
        let mut w = Self::zero();
        w.add_term(m, c);
        w
    }

    pub fn letter(endo: &Endomorphism, l: &Letter) -> Result<Self> {
        let e = endo.identity();
        let m = match l {
            Letter::S => Monomial { x: e.clone(), a: 1, b: 0, r: e },
            Letter::SStar => Monomial::canonical(endo, e.clone(), 0, 1, &e)?,
            Letter::Delta(x) => {
                endo.family().check(x)?;
                Monomial { x: x.clone(), a: 0, b: 0, r: e }
            }
        };
        Ok(Self::monomial(m, coeff(1)))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: Coeff) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m.clone()).or_insert_with(Coeff::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), *c);
        }
        out
    }

    pub fn scale(&self, c: Coeff) -> Self {
        let mut out = Self::zero();
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v * c);
        }
        out
    }

    /// Product without the final canonicalization.
    fn mul_raw(&self, endo: &Endomorphism, other: &Self) -> Result<Self> {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            for (n, d) in &other.terms {
                if let Some(p) = m.mul(endo, n)? {
                    out.add_term(p, c * d);
                }
            }
        }
        Ok(out)
    }

    pub fn mul(&self, endo: &Endomorphism, other: &Self) -> Result<Self> {
        self.mul_raw(endo, other)?.canonicalize(endo)
    }

    pub fn adjoint(&self, endo: &Endomorphism) -> Result<Self> {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(m.adjoint(endo)?, c.conj());
        }
        out.canonicalize(endo)
    }

    /// Unique representative: within each weight class, lift every monomial
    /// to the deepest level present, then collapse complete sibling families
    /// with equal coefficients from the top down.
    pub fn canonicalize(&self, endo: &Endomorphism) -> Result<Self> {
        let mut classes: BTreeMap<i64, Vec<(&Monomial, &Coeff)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            classes.entry(m.weight()).or_default().push((m, c));
        }
        let mut out = Self::zero();
        for (_, terms) in classes {
            let top = terms.iter().map(|(m, _)| m.b).max().unwrap_or(0);
            let mut level = Self::zero();
            for (m, c) in terms {
                let mut cur = Self::monomial(m.clone(), *c);
                for _ in m.b..top {
                    cur = cur.lift_once(endo)?;
                }
                level = level.add(&cur);
            }
            out = out.add(&level.collapse(endo)?);
        }
        Ok(out)
    }

    fn lift_once(&self, endo: &Endomorphism) -> Result<Self> {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            for q in endo.transversal() {
                let x = endo.multiply(&m.x, &endo.alpha_n(&q.inverse(), m.a))?;
                let r = endo.multiply(&endo.alpha_n(q, m.b), &m.r)?;
                out.add_term(Monomial { x, a: m.a + 1, b: m.b + 1, r }, *c);
            }
        }
        Ok(out)
    }

    /// Collapse within a single weight class whose monomials share one level.
    fn collapse(mut self, endo: &Endomorphism) -> Result<Self> {
        let base = endo.base();
        let mut settled = Self::zero();
        loop {
            let Some(level) = self.terms.keys().map(|m| m.b).max() else {
                return Ok(settled);
            };
            let a = self.terms.keys().find(|m| m.b == level).map(|m| m.a).unwrap_or(0);
            if level == 0 || a == 0 {
                return Ok(settled.add(&self));
            }
            // parent -> (children seen, coefficients)
            let mut families: BTreeMap<Monomial, Vec<(Monomial, Coeff)>> = BTreeMap::new();
            for (m, c) in &self.terms {
                let digits = endo.decompose(&m.r, m.b)?.digits;
                let (q, rest) = digits.split_last().expect("level is positive");
                let parent_r = endo.element_from_digits(rest);
                let parent_x = endo.multiply(&m.x, &endo.alpha_n(&endo.transversal()[*q], m.a - 1))?;
                let parent = Monomial { x: parent_x, a: m.a - 1, b: m.b - 1, r: parent_r };
                families.entry(parent).or_default().push((m.clone(), *c));
            }
            let mut next = Self::zero();
            for (parent, kids) in families {
                let seen: BTreeSet<&GroupElement> = kids.iter().map(|(m, _)| &m.r).collect();
                let c0 = kids[0].1;
                if kids.len() == base && seen.len() == base && kids.iter().all(|(_, c)| *c == c0) {
                    next.add_term(parent, c0);
                } else {
                    for (m, c) in kids {
                        settled.add_term(m, c);
                    }
                }
            }
            self = next;
        }
    }

    /// `E_𝔽`: keep the weight-zero monomials.
    pub fn ef_project(&self) -> Self {
        NormalWord { terms: self.terms.iter().filter(|(m, _)| m.is_balanced()).map(|(m, c)| (m.clone(), *c)).collect() }
    }

    pub fn weights(&self) -> BTreeSet<i64> {
        self.terms.keys().map(Monomial::weight).collect()
    }

    pub fn classify(&self) -> Classification {
        let mut it = self.terms.iter();
        match (it.next(), it.next()) {
            (None, _) => Classification::Zero,
            (Some((m, c)), None) if c.is_one() && m.is_projection() => Classification::Projection,
            _ => Classification::NonProjection,
        }
    }
}

impl fmt::Display for NormalWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| if c.is_one() { m.to_string() } else { format!("{} * {m}", fmt_coeff(c)) })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    Zero,
    Projection,
    NonProjection,
}

/// Multiply the letters left to right.
pub fn word_normalize(endo: &Endomorphism, letters: &[Letter]) -> Result<NormalWord> {
    letters.iter().try_fold(NormalWord::one(endo), |acc, l| acc.mul(endo, &NormalWord::letter(endo, l)?))
}

/// Multiply the letters right to left.
pub fn word_normalize_right(endo: &Endomorphism, letters: &[Letter]) -> Result<NormalWord> {
    letters
        .iter()
        .rev()
        .try_fold(NormalWord::one(endo), |acc, l| NormalWord::letter(endo, l)?.mul(endo, &acc))
}

/// Balanced word as an element of `𝔽ₙ`.
pub fn word_to_fn(endo: &Endomorphism, w: &NormalWord, n: usize) -> Result<FnElement> {
    let mut out = FnElement::zero(endo, n)?;
    for (m, c) in w.terms() {
        if !m.is_balanced() {
            return Err(Error::Unbalanced { isometries: m.a, coisometries: m.b });
        }
        if m.a > n {
            return Err(Error::Precondition(format!("monomial {m} lives at level {} > {n}", m.a)));
        }
        let t = triple_make(endo, &m.x, m.a, &m.r)?.scale(*c);
        out = out.add(&iota_to(endo, &t, n)?)?;
    }
    Ok(out)
}

/// `E = E_𝒜 ∘ E_𝔽` at level `n`.
pub fn e_full(endo: &Endomorphism, w: &NormalWord, n: usize) -> Result<FnElement> {
    Ok(word_to_fn(endo, &w.ef_project(), n)?.expect_an(endo))
}
