//! The regular representation `λ` truncated to a ball of `G`.
//!
//! `λ(δ_g)ξ_h = ξ_{gh}` and `λ(S)ξ_h = ξ_{α(h)}`; both become partial maps on
//! the ball. A column is *interior* for a word when the whole orbit of its
//! basis vector under the word stays in the ball; only interior columns take
//! part in comparisons.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use num_traits::Zero;

use crate::error::Result;
use crate::group::{Endomorphism, GroupElement};
use crate::ring::{Coeff, GroupRingElement};
use crate::symbolic::{Letter, NormalWord};

pub struct TruncatedRep {
    endo: Endomorphism,
    radius: u64,
    basis: Vec<GroupElement>,
    index: HashMap<GroupElement, usize>,
}

/// Image of one basis vector under a word.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Step {
    Basis(usize),
    Zero,
    OutOfBall,
}

/// Column-wise sparse operator; `None` marks a non-interior column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseOperator {
    pub columns: Vec<Option<BTreeMap<usize, Coeff>>>,
}

impl SparseOperator {
    pub fn interior(&self) -> usize {
        self.columns.iter().filter(|c| c.is_some()).count()
    }

    /// Compare on columns interior to both; returns `(agree, compared)`.
    pub fn agrees_on_interior(&self, other: &SparseOperator) -> (bool, usize) {
        let mut compared = 0;
        for (a, b) in self.columns.iter().zip(&other.columns) {
            if let (Some(a), Some(b)) = (a, b) {
                compared += 1;
                if a != b {
                    return (false, compared);
                }
            }
        }
        (true, compared)
    }

    pub fn compose(&self, other: &SparseOperator) -> SparseOperator {
        let columns = other
            .columns
            .iter()
            .map(|col| {
                let col = col.as_ref()?;
                let mut out: BTreeMap<usize, Coeff> = BTreeMap::new();
                for (&k, c) in col {
                    for (&i, d) in self.columns[k].as_ref()? {
                        let slot = out.entry(i).or_insert_with(Coeff::zero);
                        *slot += d * c;
                    }
                }
                out.retain(|_, v| !v.is_zero());
                Some(out)
            })
            .collect();
        SparseOperator { columns }
    }
}

impl TruncatedRep {
    pub fn new(endo: &Endomorphism, radius: u64, cap: u128) -> Result<Self> {
        let basis = endo.ball(radius, cap)?;
        let index = basis.iter().cloned().enumerate().map(|(i, g)| (g, i)).collect();
        Ok(TruncatedRep { endo: endo.clone(), radius, basis, index })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn radius(&self) -> u64 {
        self.radius
    }

    pub fn basis(&self) -> &[GroupElement] {
        &self.basis
    }

    pub fn position(&self, g: &GroupElement) -> Option<usize> {
        self.index.get(g).copied()
    }

    fn locate(&self, g: GroupElement) -> Step {
        self.position(&g).map_or(Step::OutOfBall, Step::Basis)
    }

    pub fn apply_letter(&self, l: &Letter, h: usize) -> Step {
        let x = &self.basis[h];
        match l {
            Letter::Delta(g) => self.locate(g * x),
            Letter::S => self.locate(self.endo.alpha(x)),
            Letter::SStar => match self.endo.preimage(x) {
                Some(g) => self.locate(g),
                None => Step::Zero,
            },
        }
    }

    /// The word acts right to left, as operators compose.
    pub fn apply_word(&self, word: &[Letter], h: usize) -> Step {
        let mut cur = h;
        for l in word.iter().rev() {
            match self.apply_letter(l, cur) {
                Step::Basis(next) => cur = next,
                other => return other,
            }
        }
        Step::Basis(cur)
    }

    pub fn evaluate_word(&self, word: &[Letter]) -> SparseOperator {
        let columns = (0..self.dim())
            .map(|h| match self.apply_word(word, h) {
                Step::Basis(i) => Some(BTreeMap::from([(i, crate::ring::coeff(1))])),
                Step::Zero => Some(BTreeMap::new()),
                Step::OutOfBall => None,
            })
            .collect();
        SparseOperator { columns }
    }

    pub fn evaluate_normal(&self, w: &NormalWord) -> SparseOperator {
        let words: Vec<(Vec<Letter>, Coeff)> = w.terms().map(|(m, c)| (m.letters(), *c)).collect();
        let columns = (0..self.dim())
            .map(|h| {
                let mut out: BTreeMap<usize, Coeff> = BTreeMap::new();
                for (word, c) in &words {
                    match self.apply_word(word, h) {
                        Step::Basis(i) => *out.entry(i).or_insert_with(Coeff::zero) += c,
                        Step::Zero => {}
                        Step::OutOfBall => return None,
                    }
                }
                out.retain(|_, v| !v.is_zero());
                Some(out)
            })
            .collect();
        SparseOperator { columns }
    }

    /// `λ(a)` compressed to the ball, as complex columns.
    fn ring_columns(&self, a: &GroupRingElement) -> Vec<Vec<(usize, Complex64)>> {
        let to_f = |c: &Coeff| {
            let f = |r: &crate::ring::Rational| *r.numer() as f64 / *r.denom() as f64;
            Complex64::new(f(&c.re), f(&c.im))
        };
        (0..self.dim())
            .map(|h| {
                a.terms()
                    .filter_map(|(g, c)| self.position(&(g * &self.basis[h])).map(|i| (i, to_f(c))))
                    .collect()
            })
            .collect()
    }
}

#[derive(Clone, Debug, Default)]
pub struct RelationCheck {
    pub checked: usize,
    pub skipped: usize,
    pub failures: usize,
}

impl RelationCheck {
    fn record(&mut self, outcome: Option<bool>) {
        match outcome {
            None => self.skipped += 1,
            Some(true) => self.checked += 1,
            Some(false) => {
                self.checked += 1;
                self.failures += 1;
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0 && self.checked > 0
    }
}

#[derive(Clone, Debug, Default)]
pub struct RelationReport {
    pub covariance: RelationCheck,
    pub orthogonality: RelationCheck,
    pub completeness: RelationCheck,
    pub isometry: RelationCheck,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.covariance.passed() && self.orthogonality.passed() && self.completeness.passed() && self.isometry.passed()
    }

    pub fn coverage(&self) -> f64 {
        let all = [&self.covariance, &self.orthogonality, &self.completeness, &self.isometry];
        let checked: usize = all.iter().map(|c| c.checked).sum();
        let total: usize = all.iter().map(|c| c.checked + c.skipped).sum();
        if total == 0 {
            0.0
        } else {
            checked as f64 / total as f64
        }
    }
}

impl fmt::Display for RelationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let line = |name: &str, c: &RelationCheck| {
            format!(
                "{name}: {} ({} checked, {} failures, {} boundary skipped)",
                if c.passed() { "PASS" } else { "FAIL" },
                c.checked,
                c.failures,
                c.skipped
            )
        };
        writeln!(f, "{}", line("(1) S d(x) = d(a(x)) S", &self.covariance))?;
        writeln!(f, "{}", line("(2) S* d(x) S = 0, x outside a(G)", &self.orthogonality))?;
        writeln!(f, "{}", line("(3) sum d(r^-1) S S* d(r) = 1", &self.completeness))?;
        writeln!(f, "{}", line("S* S = 1", &self.isometry))?;
        write!(f, "interior coverage: {:.3}", self.coverage())
    }
}

/// Relations (1)–(3) and `S*S = 1` on every interior column, with `x` over
/// `sample`.
pub fn check_relations(rep: &TruncatedRep, sample: &[GroupElement]) -> Result<RelationReport> {
    let endo = &rep.endo;
    let mut report = RelationReport::default();
    let same = |lhs: Step, rhs: Step| match (lhs, rhs) {
        (Step::OutOfBall, _) | (_, Step::OutOfBall) => None,
        (a, b) => Some(a == b),
    };
    for h in 0..rep.dim() {
        for x in sample {
            let lhs = rep.apply_word(&[Letter::S, Letter::Delta(x.clone())], h);
            let rhs = rep.apply_word(&[Letter::Delta(endo.alpha(x)), Letter::S], h);
            report.covariance.record(same(lhs, rhs));
            if endo.preimage(x).is_none() {
                let w = [Letter::SStar, Letter::Delta(x.clone()), Letter::S];
                report.orthogonality.record(same(rep.apply_word(&w, h), Step::Zero));
            }
        }
        report.isometry.record(same(rep.apply_word(&[Letter::SStar, Letter::S], h), Step::Basis(h)));
        let mut hits = Vec::new();
        let mut boundary = false;
        for r in endo.transversal() {
            let w = [Letter::Delta(r.inverse()), Letter::S, Letter::SStar, Letter::Delta(r.clone())];
            match rep.apply_word(&w, h) {
                Step::Basis(i) => hits.push(i),
                Step::Zero => {}
                Step::OutOfBall => boundary = true,
            }
        }
        report.completeness.record((!boundary).then(|| hits == [h]));
    }
    Ok(report)
}

/// Lower bound for `‖λ(a)‖` from power iteration on `(PaP)*(PaP)`, `P` the
/// projection onto the ball: the largest `‖PaPv‖/‖v‖` over the iterates.
pub fn norm_lower_bound(rep: &TruncatedRep, a: &GroupRingElement, iterations: usize) -> f64 {
    let cols = rep.ring_columns(a);
    let n = rep.dim();
    let apply = |v: &[Complex64]| -> Vec<Complex64> {
        let mut out = vec![Complex64::zero(); n];
        for (j, col) in cols.iter().enumerate() {
            for &(i, c) in col {
                out[i] += c * v[j];
            }
        }
        out
    };
    let apply_adj = |v: &[Complex64]| -> Vec<Complex64> {
        cols.iter().map(|col| col.iter().map(|&(i, c)| c.conj() * v[i]).sum()).collect()
    };
    let norm = |v: &[Complex64]| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    // a generic start: constant vectors are annihilated whenever the
    // coefficients of `a` sum to zero
    let mut rng = ChaCha8Rng::seed_from_u64(0x6e6f726d);
    let mut v: Vec<Complex64> =
        (0..n).map(|_| Complex64::new(rng.random_range(0.5..1.5), rng.random_range(-0.5..0.5))).collect();
    let mut best: f64 = 0.0;
    let mut prev = -1.0;
    for _ in 0..iterations.max(1) {
        let nv = norm(&v);
        if nv == 0.0 {
            break;
        }
        v.iter_mut().for_each(|z| *z /= nv);
        let mv = apply(&v);
        let est = norm(&mv);
        best = best.max(est);
        if (est - prev).abs() <= 1e-15 * est.max(1.0) {
            break;
        }
        prev = est;
        v = apply_adj(&mv);
    }
    best
}
