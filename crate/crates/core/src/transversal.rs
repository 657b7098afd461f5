//! Transversals `Rₙ` of `αⁿ(G)\G` and digit expansions.
//!
//! `Rₙ₊₁ = α(Rₙ)·R₁`, so an element of `Rₙ` is a digit tuple
//! `(r₀, …, rₙ₋₁) ∈ R₁ⁿ` read as `αⁿ⁻¹(rₙ₋₁)⋯α(r₁)·r₀`. Digits are stored as
//! positions in `R₁`; the index of a tuple in `Rₙ` is `Σ dᵢ·|R₁|ⁱ`, so `r₀`
//! varies fastest.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::group::{Endomorphism, GroupElement};

/// `x = αⁿ(quotient)·r` where `r ∈ Rₙ` has the given digits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub quotient: GroupElement,
    pub digits: Vec<usize>,
}

/// The first `depth` digits of the expansion of `base`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RSequence {
    pub base: GroupElement,
    pub digits: Vec<usize>,
}

impl RSequence {
    pub fn depth(&self) -> usize {
        self.digits.len()
    }
}

pub fn index_of_digits(digits: &[usize], base: usize) -> usize {
    digits.iter().rev().fold(0, |acc, &d| acc * base + d)
}

pub fn digits_of_index(mut index: usize, base: usize, level: usize) -> Vec<usize> {
    (0..level)
        .map(|_| {
            let d = index % base;
            index /= base;
            d
        })
        .collect()
}

/// `baseⁿ`, or a cap error when it exceeds `cap`.
pub fn checked_size(base: usize, level: usize, cap: u128) -> Result<usize> {
    let size = (base as u128).checked_pow(level as u32).unwrap_or(u128::MAX);
    if size > cap {
        return Err(Error::CapExceeded { required: size, cap });
    }
    Ok(size as usize)
}

impl Endomorphism {
    /// `x = α(g)·r` with `r ∈ R₁`; returns `g` and the digit of `r`.
    pub fn level1_decompose(&self, x: &GroupElement) -> Result<(GroupElement, usize)> {
        self.family().check(x)?;
        for (i, r) in self.transversal().iter().enumerate() {
            if let Some(g) = self.preimage(&(x * &r.inverse())) {
                return Ok((g, i));
            }
        }
        Err(Error::SearchExhausted { element: x.to_string() })
    }

    /// Iterated level-1 decomposition: `x = αⁿ(g)·r` with `r ∈ Rₙ`.
    pub fn decompose(&self, x: &GroupElement, n: usize) -> Result<Decomposition> {
        let mut digits = Vec::with_capacity(n);
        let mut cur = x.clone();
        for _ in 0..n {
            let (g, d) = self.level1_decompose(&cur)?;
            digits.push(d);
            cur = g;
        }
        Ok(Decomposition { quotient: cur, digits })
    }

    /// `αⁿ⁻¹(rₙ₋₁)⋯α(r₁)·r₀`.
    pub fn element_from_digits(&self, digits: &[usize]) -> GroupElement {
        let r1 = self.transversal();
        digits
            .iter()
            .rev()
            .fold(self.identity(), |acc, &d| &self.alpha(&acc) * &r1[d])
    }

    /// Position of `x`'s coset representative in `Rₙ`.
    pub fn coset_index(&self, x: &GroupElement, n: usize) -> Result<usize> {
        Ok(index_of_digits(&self.decompose(x, n)?.digits, self.base()))
    }

    pub fn r_sequence(&self, x: &GroupElement, depth: usize) -> Result<RSequence> {
        Ok(RSequence { base: x.clone(), digits: self.decompose(x, depth)?.digits })
    }

    /// Whether `x ∈ αⁿ(G)`.
    pub fn in_image(&self, x: &GroupElement, n: usize) -> Result<bool> {
        let id = self.identity_digit();
        Ok(self.decompose(x, n)?.digits.iter().all(|&d| d == id))
    }

    /// Least `n ≤ max_depth` with `x ∉ αⁿ(G)`.
    pub fn exclusion_depth(&self, x: &GroupElement, max_depth: usize) -> Result<Option<usize>> {
        let id = self.identity_digit();
        let digits = self.decompose(x, max_depth)?.digits;
        Ok(digits.iter().position(|&d| d != id).map(|i| i + 1))
    }
}

/// The ordered set `Rₙ` with a reverse lookup.
#[derive(Clone, Debug)]
pub struct Transversal {
    level: usize,
    base: usize,
    reps: Vec<GroupElement>,
    lookup: HashMap<GroupElement, usize>,
}

impl Transversal {
    pub fn build(endo: &Endomorphism, n: usize, cap: u128) -> Result<Self> {
        let base = endo.base();
        let size = checked_size(base, n, cap)?;
        let reps: Vec<GroupElement> = (0..size)
            .map(|i| endo.element_from_digits(&digits_of_index(i, base, n)))
            .collect();
        Ok(Self::from_reps(n, base, reps))
    }

    fn from_reps(level: usize, base: usize, reps: Vec<GroupElement>) -> Self {
        let lookup = reps.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
        Transversal { level, base, reps, lookup }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn reps(&self) -> &[GroupElement] {
        &self.reps
    }

    pub fn get(&self, index: usize) -> &GroupElement {
        &self.reps[index]
    }

    pub fn position(&self, r: &GroupElement) -> Option<usize> {
        self.lookup.get(r).copied()
    }

    pub fn digits(&self, index: usize) -> Vec<usize> {
        digits_of_index(index, self.base, self.level)
    }

    pub fn index_of(&self, digits: &[usize]) -> usize {
        index_of_digits(digits, self.base)
    }

    /// One line per representative: `index ↦ (digits) ↦ element`.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        for (i, r) in self.reps.iter().enumerate() {
            let digits: Vec<String> = self.digits(i).iter().map(ToString::to_string).collect();
            out.push_str(&format!("{i} ↦ ({}) ↦ {r}\n", digits.join(",")));
        }
        out
    }

    pub fn from_table(endo: &Endomorphism, level: usize, table: &str) -> Result<Self> {
        let base = endo.base();
        let mut reps = Vec::new();
        for line in table.lines().filter(|l| !l.trim().is_empty()) {
            let parts: Vec<&str> = line.split('↦').map(str::trim).collect();
            let [idx, digits, elem] = parts[..] else {
                return Err(Error::Malformed { token: line.to_string() });
            };
            let idx: usize = idx.parse().map_err(|_| Error::Malformed { token: idx.to_string() })?;
            let body = digits
                .strip_prefix('(')
                .and_then(|s| s.strip_suffix(')'))
                .ok_or_else(|| Error::Malformed { token: digits.to_string() })?;
            let digits: Vec<usize> = if body.is_empty() {
                vec![]
            } else {
                body.split(',')
                    .map(|t| t.trim().parse().map_err(|_| Error::Malformed { token: t.to_string() }))
                    .collect::<Result<_>>()?
            };
            if idx != reps.len() || digits.len() != level || index_of_digits(&digits, base) != idx {
                return Err(Error::Malformed { token: line.to_string() });
            }
            reps.push(endo.parse(elem)?);
        }
        Ok(Self::from_reps(level, base, reps))
    }

    /// Build through a disk cache keyed by the endomorphism and the level.
    pub fn cached(endo: &Endomorphism, n: usize, cap: u128, dir: &Path) -> Result<Self> {
        let path = cache_path(endo, n, dir);
        if let Ok(text) = fs::read_to_string(&path) {
            if let Ok(t) = Self::from_table(endo, n, &text) {
                if t.len() == checked_size(endo.base(), n, cap)? {
                    return Ok(t);
                }
            }
        }
        let t = Self::build(endo, n, cap)?;
        fs::create_dir_all(dir)?;
        fs::write(&path, t.to_table())?;
        Ok(t)
    }
}

pub fn cache_path(endo: &Endomorphism, n: usize, dir: &Path) -> PathBuf {
    let digest = Sha256::digest(endo.canonical_string().as_bytes());
    let hex: String = digest.iter().take(12).map(|b| format!("{b:02x}")).collect();
    dir.join(format!("{hex}-{n}.tbl"))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PurityOutcome {
    Identity,
    ExcludedAt(usize),
    Undecided,
}

#[derive(Clone, Debug)]
pub struct PurityReport {
    pub max_depth: usize,
    pub outcomes: Vec<(GroupElement, PurityOutcome)>,
    /// Decided elements sharing an R-sequence at `max_depth`.
    pub collisions: Vec<(GroupElement, GroupElement)>,
}

impl PurityReport {
    pub fn undecided(&self) -> usize {
        self.outcomes.iter().filter(|(_, o)| *o == PurityOutcome::Undecided).count()
    }

    pub fn passed(&self) -> bool {
        self.undecided() == 0 && self.collisions.is_empty()
    }
}

impl fmt::Display for PurityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (x, o) in &self.outcomes {
            match o {
                PurityOutcome::Identity => writeln!(f, "{x}\tidentity")?,
                PurityOutcome::ExcludedAt(n) => writeln!(f, "{x}\texcluded at n={n}")?,
                PurityOutcome::Undecided => writeln!(f, "{x}\tundecided at depth {}", self.max_depth)?,
            }
        }
        for (x, y) in &self.collisions {
            writeln!(f, "collision: {x} and {y} share an R-sequence at depth {}", self.max_depth)?;
        }
        write!(
            f,
            "purity: {} undecided, {} collisions",
            self.undecided(),
            self.collisions.len()
        )
    }
}

pub fn purity_report(endo: &Endomorphism, radius: u64, max_depth: usize, cap: u128) -> Result<PurityReport> {
    let mut outcomes = Vec::new();
    let mut seen: BTreeMap<Vec<usize>, GroupElement> = BTreeMap::new();
    let mut collisions = Vec::new();
    for x in endo.ball(radius, cap)? {
        let outcome = if x.is_identity() {
            PurityOutcome::Identity
        } else {
            match endo.exclusion_depth(&x, max_depth)? {
                Some(n) => PurityOutcome::ExcludedAt(n),
                None => PurityOutcome::Undecided,
            }
        };
        if outcome != PurityOutcome::Undecided {
            let digits = endo.r_sequence(&x, max_depth)?.digits;
            if let Some(prev) = seen.get(&digits) {
                collisions.push((prev.clone(), x.clone()));
            } else {
                seen.insert(digits, x.clone());
            }
        }
        outcomes.push((x, outcome));
    }
    Ok(PurityReport { max_depth, outcomes, collisions })
}

#[derive(Clone, Debug)]
pub struct NormalityReport {
    pub level: usize,
    pub checked: usize,
    /// `(g, x, g·x·g⁻¹)` with `x ∈ αⁿ(G)` but the conjugate outside.
    pub witness: Option<(GroupElement, GroupElement, GroupElement)>,
    /// Distinct `r, r' ∈ Rₙ` with `r⁻¹r' ∈ αⁿ(G)`, i.e. `Rₙ` fails to be a
    /// left transversal.
    pub left_witness: Option<(GroupElement, GroupElement)>,
}

impl NormalityReport {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

impl fmt::Display for NormalityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            None => write!(f, "normality n={}: PASS ({} conjugations)", self.level, self.checked)?,
            Some((g, x, c)) => write!(
                f,
                "normality n={}: FAIL, {g} * {x} * {g}^-1 = {c} is outside the image",
                self.level
            )?,
        }
        match &self.left_witness {
            None => write!(f, "\nleft cosets: R_{} is also a left transversal", self.level),
            Some((r, s)) => write!(
                f,
                "\nleft cosets: {r} and {s} share a left coset, so R_{} is not a left transversal",
                self.level
            ),
        }
    }
}

pub fn normality_report(endo: &Endomorphism, n: usize, radius: u64, cap: u128) -> Result<NormalityReport> {
    let mut gens = endo.family().generators(radius as usize);
    let inverses: Vec<GroupElement> = gens.iter().map(GroupElement::inverse).collect();
    for g in inverses {
        if !gens.contains(&g) {
            gens.push(g);
        }
    }
    let mut checked = 0;
    let mut witness = None;
    'outer: for x in endo.ball(radius, cap)? {
        if !endo.in_image(&x, n)? {
            continue;
        }
        for g in &gens {
            checked += 1;
            let c = x.conjugate_by(g);
            if !endo.in_image(&c, n)? {
                witness = Some((g.clone(), x.clone(), c));
                break 'outer;
            }
        }
    }
    let t = Transversal::build(endo, n, cap)?;
    let mut left_witness = None;
    'left: for (i, r) in t.reps().iter().enumerate() {
        for s in &t.reps()[i + 1..] {
            if endo.in_image(&(&r.inverse() * s), n)? {
                left_witness = Some((r.clone(), s.clone()));
                break 'left;
            }
        }
    }
    Ok(NormalityReport { level: n, checked, witness, left_witness })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{Family, DEFAULT_CAP};

    fn int(v: i64) -> GroupElement {
        GroupElement::Int(v)
    }

    #[test]
    fn level1_examples() {
        let z = Endomorphism::integer(2).unwrap();
        assert_eq!(z.level1_decompose(&int(5)).unwrap(), (int(2), 1));
        let d = Endomorphism::dihedral();
        let ab = d.parse("ab").unwrap();
        let (g, r) = d.level1_decompose(&ab).unwrap();
        assert_eq!(g.to_string(), "a");
        assert_eq!(d.transversal()[r].to_string(), "a");
        assert_eq!(d.level1_decompose(&d.identity()).unwrap(), (d.identity(), 0));
    }

    // Brute force over a ball, independent of the preimage rule.
    fn search_decompose(endo: &Endomorphism, x: &GroupElement) -> (GroupElement, usize) {
        let radius = x.length().max(1) + 1;
        let mut found = None;
        for g in endo.ball(radius, DEFAULT_CAP).unwrap() {
            for (i, r) in endo.transversal().iter().enumerate() {
                if &endo.alpha(&g) * r == *x {
                    assert!(found.is_none(), "decomposition of {x} is not unique");
                    found = Some((g.clone(), i));
                }
            }
        }
        found.expect("no decomposition found")
    }

    #[test]
    fn level1_matches_search() {
        for endo in [
            Endomorphism::integer(3).unwrap(),
            Endomorphism::dihedral(),
            Endomorphism::shift(2).unwrap(),
            Endomorphism::shift(3).unwrap(),
        ] {
            for x in endo.ball(4, DEFAULT_CAP).unwrap() {
                assert_eq!(endo.level1_decompose(&x).unwrap(), search_decompose(&endo, &x), "{x}");
            }
        }
    }

    #[test]
    fn build_examples() {
        let z = Endomorphism::integer(2).unwrap();
        let t = Transversal::build(&z, 3, DEFAULT_CAP).unwrap();
        let reps: Vec<i64> = t.reps().iter().map(|r| match r {
            GroupElement::Int(v) => *v,
            _ => unreachable!(),
        }).collect();
        assert_eq!(reps, (0..8).collect::<Vec<_>>());
        for i in 0..8 {
            // binary digits, least significant first
            let bits: Vec<usize> = (0..3).map(|b| (i >> b) & 1).collect();
            assert_eq!(t.digits(i), bits);
        }
        assert_eq!(Transversal::build(&z, 0, DEFAULT_CAP).unwrap().reps(), &[int(0)]);
        let d = Endomorphism::dihedral();
        let t2 = Transversal::build(&d, 2, DEFAULT_CAP).unwrap();
        assert_eq!(t2.len(), 9);
        assert!(t2.position(&d.parse("abab").unwrap()).is_some());
        assert!(matches!(
            Transversal::build(&z, 40, DEFAULT_CAP),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn decompose_examples() {
        let z = Endomorphism::integer(2).unwrap();
        let dec = z.decompose(&int(5), 2).unwrap();
        assert_eq!(dec.quotient, int(1));
        assert_eq!(z.element_from_digits(&dec.digits), int(1));
        let d = Endomorphism::dihedral();
        let a = d.parse("a").unwrap();
        let x = d.alpha(&d.alpha(&a));
        let dec = d.decompose(&x, 2).unwrap();
        assert_eq!(dec.quotient, a);
        assert_eq!(dec.digits, vec![0, 0]);
    }

    #[test]
    fn r_sequence_examples() {
        let z = Endomorphism::integer(2).unwrap();
        assert_eq!(z.r_sequence(&int(5), 4).unwrap().digits, vec![1, 0, 1, 0]);
        assert_eq!(z.r_sequence(&int(-1), 4).unwrap().digits, vec![1, 1, 1, 1]);
        assert_eq!(z.r_sequence(&int(0), 3).unwrap().digits, vec![0, 0, 0]);
    }

    #[test]
    fn table_round_trip() {
        let d = Endomorphism::dihedral();
        let t = Transversal::build(&d, 2, DEFAULT_CAP).unwrap();
        let back = Transversal::from_table(&d, 2, &t.to_table()).unwrap();
        assert_eq!(back.reps(), t.reps());
        let dir = tempfile::tempdir().unwrap();
        let first = Transversal::cached(&d, 2, DEFAULT_CAP, dir.path()).unwrap();
        assert!(cache_path(&d, 2, dir.path()).exists());
        let second = Transversal::cached(&d, 2, DEFAULT_CAP, dir.path()).unwrap();
        assert_eq!(first.reps(), second.reps());
    }

    #[test]
    fn purity_examples() {
        let z = Endomorphism::integer(2).unwrap();
        let rep = purity_report(&z, 8, 8, DEFAULT_CAP).unwrap();
        assert!(rep.passed());
        for (x, o) in &rep.outcomes {
            let GroupElement::Int(v) = x else { unreachable!() };
            if *v == 0 {
                assert_eq!(*o, PurityOutcome::Identity);
            } else {
                assert_eq!(*o, PurityOutcome::ExcludedAt(v.trailing_zeros() as usize + 1));
            }
        }
        let d = Endomorphism::dihedral();
        let rep = purity_report(&d, 6, 4, DEFAULT_CAP).unwrap();
        assert!(rep.passed());
        assert!(rep.outcomes.iter().all(|(_, o)| matches!(
            o,
            PurityOutcome::Identity | PurityOutcome::ExcludedAt(1) | PurityOutcome::ExcludedAt(2)
        )));
    }

    #[test]
    fn normality_examples() {
        let z = Endomorphism::integer(3).unwrap();
        assert!(normality_report(&z, 2, 10, DEFAULT_CAP).unwrap().passed());
        let s = Endomorphism::shift(2).unwrap();
        assert!(normality_report(&s, 2, 4, DEFAULT_CAP).unwrap().passed());
        let d = Endomorphism::dihedral();
        let rep = normality_report(&d, 1, 6, DEFAULT_CAP).unwrap();
        assert!(!rep.passed());
        let (g, x, c) = rep.witness.unwrap();
        assert!(d.in_image(&x, 1).unwrap());
        assert_eq!(c, x.conjugate_by(&g));
        assert!(!d.in_image(&c, 1).unwrap());
        assert_eq!(Family::Dihedral.parse("aaba").unwrap().to_string(), "ba");
    }
}
