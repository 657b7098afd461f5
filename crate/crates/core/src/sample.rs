//! Seeded random inputs for the property suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::fn_algebra::FnElement;
use crate::group::{Endomorphism, GroupElement};
use crate::ring::{coeff, coeff_frac, imag_unit, Coeff, GroupRingElement};
use crate::symbolic::Letter;

pub struct Sampler {
    endo: Endomorphism,
    ball: Vec<GroupElement>,
    rng: ChaCha8Rng,
}

impl Sampler {
    /// Elements are drawn uniformly from the ball of `radius`.
    pub fn new(endo: &Endomorphism, radius: u64, seed: u64, cap: u128) -> Result<Self> {
        Ok(Sampler { endo: endo.clone(), ball: endo.ball(radius, cap)?, rng: ChaCha8Rng::seed_from_u64(seed) })
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn element(&mut self) -> GroupElement {
        self.ball[self.rng.random_range(0..self.ball.len())].clone()
    }

    pub fn non_identity(&mut self) -> GroupElement {
        loop {
            let g = self.element();
            if !g.is_identity() {
                return g;
            }
        }
    }

    /// Small Gaussian-rational coefficient, never zero.
    pub fn coefficient(&mut self) -> Coeff {
        match self.rng.random_range(0..6) {
            0 => imag_unit() * coeff(self.rng.random_range(1..4)),
            1 => coeff_frac(self.rng.random_range(-3..4) * 2 + 1, 2),
            _ => {
                let v = self.rng.random_range(1..5);
                coeff(if self.rng.random_bool(0.5) { v } else { -v })
            }
        }
    }

    pub fn ring_element(&mut self, max_terms: usize) -> GroupRingElement {
        let mut a = GroupRingElement::zero();
        for _ in 0..self.rng.random_range(1..=max_terms) {
            let c = self.coefficient();
            a.add_term(self.element(), c);
        }
        a
    }

    /// A nonzero element with vanishing identity coefficient.
    pub fn trace_zero(&mut self, max_terms: usize) -> GroupRingElement {
        let mut a = GroupRingElement::zero();
        while a.is_zero() {
            for _ in 0..self.rng.random_range(1..=max_terms) {
                let c = self.coefficient();
                a.add_term(self.non_identity(), c);
            }
        }
        a
    }

    pub fn fn_element(&mut self, level: usize, max_entries: usize) -> Result<FnElement> {
        let mut out = FnElement::zero(&self.endo, level)?;
        let dim = out.dim();
        for _ in 0..self.rng.random_range(1..=max_entries) {
            let (i, j) = (self.rng.random_range(0..dim), self.rng.random_range(0..dim));
            let e = self.ring_element(2);
            out.add_entry(i, j, &e);
        }
        Ok(out)
    }

    pub fn letter(&mut self) -> Letter {
        match self.rng.random_range(0..4) {
            0 => Letter::S,
            1 => Letter::SStar,
            _ => Letter::Delta(self.element()),
        }
    }

    pub fn word(&mut self, max_len: usize) -> Vec<Letter> {
        let len = self.rng.random_range(1..=max_len);
        (0..len).map(|_| self.letter()).collect()
    }
}
