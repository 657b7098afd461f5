//! Finitely supported elements of the complex group ring `ℂG` with Gaussian
//! rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::group::{Family, GroupElement};

pub type Rational = Ratio<i64>;
/// Exact coefficient `p + q·i` with rational `p`, `q`.
pub type Coeff = Complex<Rational>;

pub fn coeff(re: i64) -> Coeff {
    Complex::new(Rational::from_integer(re), Rational::zero())
}

pub fn coeff_frac(num: i64, den: i64) -> Coeff {
    Complex::new(Rational::new(num, den), Rational::zero())
}

pub fn imag_unit() -> Coeff {
    Complex::new(Rational::zero(), Rational::one())
}

fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// `3`, `-1/2`, `2i`, `-i`, `(1+i)`.
pub fn fmt_coeff(c: &Coeff) -> String {
    let imag = |q: &Rational| -> String {
        if q.is_one() {
            "i".into()
        } else if (-q).is_one() {
            "-i".into()
        } else {
            format!("{}i", fmt_rational(q))
        }
    };
    match (c.re.is_zero(), c.im.is_zero()) {
        (_, true) => fmt_rational(&c.re),
        (true, false) => imag(&c.im),
        (false, false) => {
            let im = imag(&c.im);
            if im.starts_with('-') {
                format!("({}{im})", fmt_rational(&c.re))
            } else {
                format!("({}+{im})", fmt_rational(&c.re))
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GroupRingElement {
    terms: BTreeMap<GroupElement, Coeff>,
}

impl GroupRingElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn delta(x: GroupElement) -> Self {
        Self::term(x, coeff(1))
    }

    pub fn term(x: GroupElement, c: Coeff) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(x, c);
        }
        GroupRingElement { terms }
    }

    pub fn one(family: Family) -> Self {
        Self::delta(family.identity())
    }

    pub fn scalar(family: Family, c: Coeff) -> Self {
        Self::term(family.identity(), c)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GroupElement, &Coeff)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &GroupElement> {
        self.terms.keys()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, x: GroupElement, c: Coeff) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(x).or_insert_with(Coeff::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    /// `â(g)`, the coefficient at `g`.
    pub fn coefficient(&self, g: &GroupElement) -> Coeff {
        self.terms.get(g).copied().unwrap_or_else(Coeff::zero)
    }

    /// Coefficient at the identity.
    pub fn trace(&self) -> Coeff {
        self.terms
            .iter()
            .find(|(g, _)| g.is_identity())
            .map(|(_, c)| *c)
            .unwrap_or_else(Coeff::zero)
    }

    pub fn adjoint(&self) -> Self {
        GroupRingElement {
            terms: self.terms.iter().map(|(g, c)| (g.inverse(), c.conj())).collect(),
        }
    }

    pub fn scale(&self, c: Coeff) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        GroupRingElement { terms: self.terms.iter().map(|(g, v)| (g.clone(), v * c)).collect() }
    }

    /// Left translation by `δₓ`.
    pub fn left_translate(&self, x: &GroupElement) -> Self {
        GroupRingElement { terms: self.terms.iter().map(|(g, c)| (x * g, *c)).collect() }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        let mut out = Self::zero();
        for (g, c) in &self.terms {
            for (h, d) in &other.terms {
                out.add_term(g.try_mul(h)?, c * d);
            }
        }
        Ok(out)
    }

    /// Sum of `|re| + |im|` over coefficients, an upper bound for every
    /// C*-norm.
    pub fn l1_norm(&self) -> f64 {
        let f = |r: &Rational| *r.numer() as f64 / *r.denom() as f64;
        self.terms.values().map(|c| f(&c.re).hypot(f(&c.im))).sum()
    }

    /// Parse expressions such as `1/2 + 1/2*d(a)`, `z^-2 - 3i*z`, `(1+d(a))/2`.
    pub fn parse(family: Family, raw: &str) -> Result<Self> {
        let mut p = Parser { family, src: raw, pos: 0 };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos < raw.len() {
            return Err(Error::Malformed { token: raw[p.pos..].to_string() });
        }
        Ok(e)
    }
}

impl Add for &GroupRingElement {
    type Output = GroupRingElement;
    fn add(self, rhs: &GroupRingElement) -> GroupRingElement {
        let mut out = self.clone();
        for (g, c) in &rhs.terms {
            out.add_term(g.clone(), *c);
        }
        out
    }
}

impl Sub for &GroupRingElement {
    type Output = GroupRingElement;
    fn sub(self, rhs: &GroupRingElement) -> GroupRingElement {
        self + &(-rhs)
    }
}

impl Neg for &GroupRingElement {
    type Output = GroupRingElement;
    fn neg(self) -> GroupRingElement {
        self.scale(-coeff(1))
    }
}

/// Panics on a family mismatch.
impl Mul for &GroupRingElement {
    type Output = GroupRingElement;
    fn mul(self, rhs: &GroupRingElement) -> GroupRingElement {
        self.try_mul(rhs).expect("group ring elements from different families")
    }
}

fn fmt_atom(g: &GroupElement) -> String {
    match g {
        GroupElement::Int(0) => "1".into(),
        GroupElement::Int(1) => "z".into(),
        GroupElement::Int(k) => format!("z^{k}"),
        other if other.is_identity() => "1".into(),
        other => format!("d({other})"),
    }
}

impl fmt::Display for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        // Identity first, then by length.
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by_key(|(g, _)| (g.length(), (*g).clone()));
        for (i, (g, c)) in terms.into_iter().enumerate() {
            let neg = c.im.is_zero() && c.re.is_negative();
            let mag = if neg { -c } else { *c };
            if i > 0 {
                f.write_str(if neg { " - " } else { " + " })?;
            } else if neg {
                f.write_str("-")?;
            }
            let atom = fmt_atom(g);
            if g.is_identity() {
                f.write_str(&fmt_coeff(&mag))?;
            } else if mag.is_one() {
                f.write_str(&atom)?;
            } else {
                write!(f, "{}*{atom}", fmt_coeff(&mag))?;
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    family: Family,
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.src[self.pos..].chars().next().map_or(1, char::len_utf8);
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) {
        self.pos += self.src[self.pos..].chars().next().map_or(0, char::len_utf8);
    }

    fn err(&self) -> Error {
        let rest = &self.src[self.pos..];
        let token = rest.split_whitespace().next().unwrap_or(rest);
        Error::Malformed { token: if token.is_empty() { "<end>".into() } else { token.into() } }
    }

    fn expr(&mut self) -> Result<GroupRingElement> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                '+' => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                '-' => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<GroupRingElement> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.bump();
                    acc = acc.try_mul(&self.factor()?)?;
                }
                Some('/') => {
                    self.bump();
                    let den = self.factor()?;
                    let c = den.coefficient(&self.family.identity());
                    if den.len() != 1 || c.is_zero() {
                        return Err(Error::Malformed { token: "/".into() });
                    }
                    acc = acc.scale(c.inv());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn number(&mut self) -> Result<i64> {
        let start = self.pos;
        while self.src[self.pos..].starts_with(|c: char| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.src[start..self.pos].parse().map_err(|_| self.err())
    }

    fn factor(&mut self) -> Result<GroupRingElement> {
        let fam = self.family;
        match self.peek().ok_or_else(|| self.err())? {
            '-' => {
                self.bump();
                Ok(-&self.factor()?)
            }
            '(' => {
                self.bump();
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.err());
                }
                self.bump();
                Ok(e)
            }
            c if c.is_ascii_digit() => {
                let n = self.number()?;
                if self.src[self.pos..].starts_with('i') {
                    self.bump();
                    Ok(GroupRingElement::scalar(fam, imag_unit() * coeff(n)))
                } else {
                    Ok(GroupRingElement::scalar(fam, coeff(n)))
                }
            }
            'i' => {
                self.bump();
                Ok(GroupRingElement::scalar(fam, imag_unit()))
            }
            'z' if matches!(fam, Family::Integer { .. }) => {
                self.bump();
                let mut k = 1;
                if self.src[self.pos..].starts_with('^') {
                    self.bump();
                    let neg = self.src[self.pos..].starts_with('-');
                    if neg {
                        self.bump();
                    }
                    k = self.number()?;
                    if neg {
                        k = -k;
                    }
                }
                Ok(GroupRingElement::delta(GroupElement::Int(k)))
            }
            'd' if self.src[self.pos..].starts_with("d(") => {
                self.pos += 2;
                let start = self.pos;
                let mut depth = 1;
                for (i, ch) in self.src[start..].char_indices() {
                    match ch {
                        '(' => depth += 1,
                        ')' => {
                            depth -= 1;
                            if depth == 0 {
                                let inner = &self.src[start..start + i];
                                self.pos = start + i + 1;
                                return Ok(GroupRingElement::delta(fam.parse(inner)?));
                            }
                        }
                        _ => {}
                    }
                }
                Err(Error::Malformed { token: self.src[start - 2..].to_string() })
            }
            _ => Err(self.err()),
        }
    }
}
