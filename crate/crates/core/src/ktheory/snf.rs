//! Smith normal form over ℤ with transformation matrices.
//!
//! Elimination runs on arbitrary-precision integers, since the transforms of
//! even small inputs can pass 64 bits mid-computation; results come back as
//! 128-bit matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::matrix::IntMatrix;
use crate::error::{Error, Result};

/// `U·A·V = D` with `U`, `V` unimodular and `D` diagonal, nonnegative,
/// `d₁ | d₂ | ⋯`. The inverses of `U` and `V` are tracked exactly alongside.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snf {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
}

impl Snf {
    pub fn diagonal(&self) -> Vec<i128> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d[(i, i)]).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|&&x| x != 0).count()
    }

    /// Columns of `V` spanning the integer kernel of `A`.
    pub fn kernel_basis(&self) -> Vec<Vec<i128>> {
        (self.rank()..self.v.cols()).map(|j| self.v.column(j)).collect()
    }
}

#[derive(Clone)]
struct Big {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl Big {
    fn identity(n: usize) -> Self {
        let mut data = vec![BigInt::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = BigInt::one();
        }
        Big { rows: n, cols: n, data }
    }

    fn from(a: &IntMatrix) -> Self {
        let data = (0..a.rows()).flat_map(|i| a.row(i).iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>()).collect();
        Big { rows: a.rows(), cols: a.cols(), data }
    }

    fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    fn row(&self, i: usize) -> Vec<BigInt> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn add_row(&mut self, dst: usize, src: usize, c: &BigInt) {
        for j in 0..self.cols {
            let v = c * self.at(src, j);
            self.data[dst * self.cols + j] += v;
        }
    }

    fn add_col(&mut self, dst: usize, src: usize, c: &BigInt) {
        for i in 0..self.rows {
            let v = c * self.at(i, src);
            self.data[i * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let k = i * self.cols + j;
            self.data[k] = -std::mem::take(&mut self.data[k]);
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let k = i * self.cols + j;
            self.data[k] = -std::mem::take(&mut self.data[k]);
        }
    }

    fn narrow(&self) -> Result<IntMatrix> {
        let mut out = IntMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self
                    .at(i, j)
                    .to_i128()
                    .ok_or_else(|| Error::Overflow(format!("Smith transform entry {} exceeds 128 bits", self.at(i, j))))?;
            }
        }
        Ok(out)
    }
}

/// Working state: row operations on `D` go through `U` (and `U⁻¹` by the
/// inverse column operation); column operations through `V` and `V⁻¹`.
struct State {
    u: Big,
    d: Big,
    v: Big,
    u_inv: Big,
    v_inv: Big,
}

impl State {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.d.swap_rows(a, b);
        self.u.swap_rows(a, b);
        self.u_inv.swap_cols(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.d.swap_cols(a, b);
        self.v.swap_cols(a, b);
        self.v_inv.swap_rows(a, b);
    }

    /// `row[dst] += c·row[src]`, optionally leaving `D` alone.
    fn add_row(&mut self, dst: usize, src: usize, c: &BigInt, touch_d: bool) {
        if touch_d {
            self.d.add_row(dst, src, c);
        }
        self.u.add_row(dst, src, c);
        self.u_inv.add_col(src, dst, &-c);
    }

    /// `col[dst] += c·col[src]`, optionally leaving `D` alone.
    fn add_col(&mut self, dst: usize, src: usize, c: &BigInt, touch_d: bool) {
        if touch_d {
            self.d.add_col(dst, src, c);
        }
        self.v.add_col(dst, src, c);
        self.v_inv.add_row(src, dst, &-c);
    }

    fn negate_row(&mut self, i: usize) {
        self.d.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }

    fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols)).map(|i| self.d.at(i, i).clone()).collect()
    }
}

/// Quotient rounded to nearest, so remainders are at most `|p|/2`.
fn div_round(a: &BigInt, p: &BigInt) -> BigInt {
    let (q, r) = a.div_mod_floor(p);
    let twice: BigInt = r.abs() * 2;
    // floor division leaves r with the sign of p, so a - (q+1)p = r - p is the other candidate
    if twice > p.abs() {
        q + 1
    } else {
        q
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> Result<Snf> {
    let (m, n) = (a.rows(), a.cols());
    let mut s = State { u: Big::identity(m), d: Big::from(a), v: Big::identity(n), u_inv: Big::identity(m), v_inv: Big::identity(n) };
    'pivots: for t in 0..m.min(n) {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    let x = s.d.at(i, j);
                    if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < s.d.at(bi, bj).abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                break 'pivots;
            };
            s.swap_rows(t, pi);
            s.swap_cols(t, pj);
            let p = s.d.at(t, t).clone();
            let mut clean = true;
            for i in t + 1..m {
                let q = div_round(s.d.at(i, t), &p);
                if !q.is_zero() {
                    s.add_row(i, t, &-q, true);
                }
                clean &= s.d.at(i, t).is_zero();
            }
            for j in t + 1..n {
                let q = div_round(s.d.at(t, j), &p);
                if !q.is_zero() {
                    s.add_col(j, t, &-q, true);
                }
                clean &= s.d.at(t, j).is_zero();
            }
            if !clean {
                continue;
            }
            match (t + 1..m).find(|&i| (t + 1..n).any(|j| !s.d.at(i, j).is_multiple_of(&p))) {
                Some(i) => s.add_row(t, i, &BigInt::one(), true),
                None => break,
            }
        }
    }
    for t in 0..m.min(n) {
        if s.d.at(t, t).is_negative() {
            s.negate_row(t);
        }
    }
    reduce(&mut s);
    Ok(Snf { u: s.u.narrow()?, d: s.d.narrow()?, v: s.v.narrow()?, u_inv: s.u_inv.narrow()?, v_inv: s.v_inv.narrow()? })
}

fn to_f(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

fn dot(a: &[BigInt], b: &[BigInt]) -> f64 {
    a.iter().zip(b).map(|(x, y)| to_f(x) * to_f(y)).sum()
}

fn norm2(a: &[BigInt]) -> f64 {
    dot(a, a)
}

fn axpy(a: &[BigInt], c: &BigInt, b: &[BigInt]) -> Vec<BigInt> {
    a.iter().zip(b).map(|(x, y)| x + c * y).collect()
}

/// Rounded `x`, or `None` when zero or not representable.
fn multiplier(x: f64) -> Option<BigInt> {
    let r = x.round();
    (r != 0.0 && r.is_finite()).then(|| BigInt::from(r as i128))
}

/// Shrink `U` and `V` without changing `D`.
///
/// Rows of `U` past the rank span the left kernel, so adding them to any row
/// is free; the same holds for columns of `V` past the rank. Inside the rank,
/// `row_i(U) += a·row_j(U)` is undone by `col_j(V) −= b·col_i(V)` whenever
/// `a·d_j = b·d_i`.
fn reduce(s: &mut State) {
    let diag = s.diagonal();
    let r = diag.iter().filter(|x| !x.is_zero()).count();
    let (m, n) = (s.u.rows, s.v.cols);
    for _ in 0..200 {
        let mut improved = false;
        for k in r..m {
            let uk = s.u.row(k);
            if norm2(&uk) == 0.0 {
                continue;
            }
            for i in (0..m).filter(|&i| i != k) {
                let ui = s.u.row(i);
                if let Some(c) = multiplier(-dot(&ui, &uk) / norm2(&uk)) {
                    if norm2(&axpy(&ui, &c, &uk)) < norm2(&ui) {
                        s.add_row(i, k, &c, false);
                        improved = true;
                    }
                }
            }
        }
        for k in r..n {
            let vk = s.v.column(k);
            if norm2(&vk) == 0.0 {
                continue;
            }
            for j in (0..n).filter(|&j| j != k) {
                let vj = s.v.column(j);
                if let Some(c) = multiplier(-dot(&vj, &vk) / norm2(&vk)) {
                    if norm2(&axpy(&vj, &c, &vk)) < norm2(&vj) {
                        s.add_col(j, k, &c, false);
                        improved = true;
                    }
                }
            }
        }
        for i in 0..r {
            for j in (0..r).filter(|&j| j != i) {
                let g = diag[i].gcd(&diag[j]);
                let (p, q) = (&diag[i] / &g, &diag[j] / &g);
                let (ui, uj, vi, vj) = (s.u.row(i), s.u.row(j), s.v.column(i), s.v.column(j));
                let before = norm2(&ui) + norm2(&vj);
                let candidates = [
                    multiplier(-dot(&ui, &uj) / (to_f(&p) * norm2(&uj))),
                    multiplier(dot(&vj, &vi) / (to_f(&q) * norm2(&vi))),
                ];
                let mut best: Option<(f64, BigInt)> = None;
                for c in candidates.into_iter().flatten() {
                    let after = norm2(&axpy(&ui, &(&c * &p), &uj)) + norm2(&axpy(&vj, &-(&c * &q), &vi));
                    if after < before * (1.0 - 1e-12) && best.as_ref().is_none_or(|b| after < b.0) {
                        best = Some((after, c));
                    }
                }
                if let Some((_, c)) = best {
                    s.add_row(i, j, &(&c * &p), false);
                    s.add_col(j, i, &-(&c * &q), false);
                    improved = true;
                }
            }
        }
        if !improved {
            break;
        }
    }
}

/// Integer kernel basis of `A` (columns).
pub fn integer_kernel(a: &IntMatrix) -> Result<Vec<Vec<i128>>> {
    Ok(smith_normal_form(a)?.kernel_basis())
}

pub fn rank(a: &IntMatrix) -> Result<usize> {
    Ok(smith_normal_form(a)?.rank())
}
