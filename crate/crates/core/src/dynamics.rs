//! Finite-depth dynamics on `R₁^ℕ`: the right action of `G` on cylinders,
//! stabilizers, the `Ψ` maps and the partial action of words in
//! `S`, `S*`, `δₓ`.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group::{Endomorphism, GroupElement};
use crate::symbolic::{word_normalize, Classification, Letter};
use crate::transversal::{checked_size, digits_of_index, index_of_digits};

/// `{r₀} × ⋯ × {rₙ₋₁} × R₁ × R₁ × ⋯`, digits as positions in `R₁`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cylinder {
    pub digits: Vec<usize>,
}

impl Cylinder {
    pub fn new(endo: &Endomorphism, digits: Vec<usize>) -> Result<Self> {
        if let Some(&d) = digits.iter().find(|&&d| d >= endo.base()) {
            return Err(Error::Malformed { token: d.to_string() });
        }
        Ok(Cylinder { digits })
    }

    pub fn depth(&self) -> usize {
        self.digits.len()
    }

    pub fn truncate(&self, depth: usize) -> Cylinder {
        Cylinder { digits: self.digits[..depth.min(self.digits.len())].to_vec() }
    }

    /// `[r0,r1,...]`.
    pub fn parse(endo: &Endomorphism, raw: &str) -> Result<Self> {
        let raw = raw.trim();
        let body = raw
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| Error::Malformed { token: raw.to_string() })?;
        let digits = if body.trim().is_empty() {
            vec![]
        } else {
            body.split(',')
                .map(|t| t.trim().parse().map_err(|_| Error::Malformed { token: t.trim().to_string() }))
                .collect::<Result<_>>()?
        };
        Self::new(endo, digits)
    }

    /// Whether the two clopen sets meet, i.e. they agree on the common prefix.
    pub fn meets(&self, other: &Cylinder) -> bool {
        self.digits.iter().zip(&other.digits).all(|(a, b)| a == b)
    }
}

impl fmt::Display for Cylinder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d: Vec<String> = self.digits.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", d.join(","))
    }
}

/// Right action: the cylinder of the coset `αⁿ(G)·r·x`.
pub fn act(endo: &Endomorphism, c: &Cylinder, x: &GroupElement) -> Result<Cylinder> {
    let r = endo.element_from_digits(&c.digits);
    let rx = endo.multiply(&r, x)?;
    Ok(Cylinder { digits: endo.decompose(&rx, c.depth())?.digits })
}

/// Add-with-carry of 1 in base `N`, least significant digit first.
pub fn odometer_step(digits: &[usize], base: usize) -> Vec<usize> {
    let mut out = digits.to_vec();
    for d in out.iter_mut() {
        *d += 1;
        if *d < base {
            break;
        }
        *d = 0;
    }
    out
}

/// Exhaustively compares `act(·, 1)` with add-with-carry; needs the integer
/// family with the default transversal.
pub fn odometer_check(endo: &Endomorphism, depth: usize, cap: u128) -> Result<bool> {
    let one = match endo.family() {
        crate::group::Family::Integer { .. } => GroupElement::Int(1),
        other => return Err(Error::Precondition(format!("odometer check needs the integer family, got {other}"))),
    };
    let base = endo.base();
    let size = checked_size(base, depth, cap)?;
    for i in 0..size {
        let c = Cylinder { digits: digits_of_index(i, base, depth) };
        let moved = act(endo, &c, &one)?;
        let expected: Vec<usize> = odometer_step(&c.digits, base)
            .into_iter()
            .map(|v| endo.digit_of(&GroupElement::Int(v as i64)).expect("default transversal"))
            .collect();
        if moved.digits != expected {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether `y` fixes the cylinder `c` of depth `n+1`, computed both from the
/// action and from `xₙ·y·xₙ⁻¹ ∈ αⁿ⁺¹(G)`; disagreement is an error.
pub fn stabilizer_membership(endo: &Endomorphism, c: &Cylinder, y: &GroupElement) -> Result<bool> {
    let by_action = act(endo, c, y)? == *c;
    let xn = endo.element_from_digits(&c.digits);
    let by_formula = endo.in_image(&y.conjugate_by(&xn), c.depth())?;
    if by_action != by_formula {
        return Err(Error::Inconsistent(format!(
            "stabilizer of {c}: action says {by_action}, conjugation says {by_formula} for {y}"
        )));
    }
    Ok(by_action)
}

/// Whether `y` fixes every cylinder of depth `n`.
pub fn fixes_all_cylinders(endo: &Endomorphism, n: usize, y: &GroupElement, cap: u128) -> Result<bool> {
    let base = endo.base();
    for i in 0..checked_size(base, n, cap)? {
        let c = Cylinder { digits: digits_of_index(i, base, n) };
        if act(endo, &c, y)? != c {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `Ψₖⁿ(x₁, …, x_{n+k})`: the `Rₙ` digits of
/// `x₁⁻¹·α(x₂⁻¹)⋯αⁿ⁻¹(xₙ⁻¹) · αⁿ⁻¹(x_{n+k})⋯α(x_{k+2})·x_{k+1}`.
pub fn psi(endo: &Endomorphism, k: usize, n: usize, input: &[usize]) -> Result<Vec<usize>> {
    if input.len() != n + k {
        return Err(Error::Precondition(format!("psi needs {} digits, got {}", n + k, input.len())));
    }
    let r1 = endo.transversal();
    let mut left = endo.identity();
    for i in 0..n {
        left = &left * &endo.alpha_n(&r1[input[i]].inverse(), i);
    }
    // αⁿ⁻¹(x_{n+k})⋯x_{k+1} is the element with digits (x_{k+1}, …, x_{n+k})
    let right = endo.element_from_digits(&input[k..]);
    Ok(endo.decompose(&(&left * &right), n)?.digits)
}

#[derive(Clone, Debug)]
pub struct FiberCensus {
    pub k: usize,
    pub n: usize,
    /// Fiber size over each output index, in index order.
    pub fibers: Vec<usize>,
    pub expected: usize,
}

impl FiberCensus {
    pub fn uniform(&self) -> bool {
        self.fibers.iter().all(|&f| f == self.expected)
    }
}

impl fmt::Display for FiberCensus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "output\tfiber")?;
        for (i, size) in self.fibers.iter().enumerate() {
            writeln!(f, "{i}\t{size}")?;
        }
        write!(
            f,
            "psi k={} n={}: {} (expected every fiber = {})",
            self.k,
            self.n,
            if self.uniform() { "PASS" } else { "FAIL" },
            self.expected
        )
    }
}

pub fn psi_fiber_census(endo: &Endomorphism, k: usize, n: usize, cap: u128) -> Result<FiberCensus> {
    let base = endo.base();
    let inputs = checked_size(base, n + k, cap)?;
    let mut fibers = vec![0usize; checked_size(base, n, cap)?];
    for i in 0..inputs {
        let out = psi(endo, k, n, &digits_of_index(i, base, n + k))?;
        fibers[index_of_digits(&out, base)] += 1;
    }
    Ok(FiberCensus { k, n, fibers, expected: base.pow(k as u32) })
}

/// First input where dropping the last input digit before `Ψ` differs from
/// dropping the last output digit after it.
pub fn psi_diagram_counterexample(
    endo: &Endomorphism,
    k: usize,
    n: usize,
    cap: u128,
) -> Result<Option<Vec<usize>>> {
    let base = endo.base();
    for i in 0..checked_size(base, n + k, cap)? {
        let input = digits_of_index(i, base, n + k);
        let full = psi(endo, k, n, &input)?;
        let short = psi(endo, k, n - 1, &input[..n + k - 1])?;
        if full[..n - 1] != short[..] {
            return Ok(Some(input));
        }
    }
    Ok(None)
}

/// If `c·y` agrees with `c` shifted by `k` digits, check that `Ψₖ(c)` is the
/// R-sequence of `y`. Vacuously true otherwise.
pub fn tail_witness_check(endo: &Endomorphism, c: &Cylinder, y: &GroupElement, k: usize) -> Result<bool> {
    let d = c.depth();
    if d <= k {
        return Err(Error::Precondition(format!("depth {d} must exceed k = {k}")));
    }
    let moved = act(endo, c, y)?;
    if moved.digits[..d - k] != c.digits[k..] {
        return Ok(true);
    }
    let image = psi(endo, k, d - k, &c.digits)?;
    Ok(image == endo.r_sequence(y, d - k)?.digits)
}

/// Outcome of the partial action on a cylinder.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ActOutcome {
    Cylinder(Cylinder),
    Empty,
    UndefinedAtDepth,
}

/// `B·U = supp(U χ_B U*)`, so letters act right to left:
/// `B·(UV) = (B·V)·U`. `S` prepends the identity digit, `S*` removes a
/// leading identity digit (and empties other cylinders), `δₓ` moves the
/// coset by `x⁻¹`.
pub fn semigroup_act(endo: &Endomorphism, word: &[Letter], c: &Cylinder) -> Result<ActOutcome> {
    let id = endo.identity_digit();
    let mut cur = c.clone();
    for l in word.iter().rev() {
        cur = match l {
            Letter::S => {
                let mut digits = Vec::with_capacity(cur.depth() + 1);
                digits.push(id);
                digits.extend_from_slice(&cur.digits);
                Cylinder { digits }
            }
            Letter::SStar => match cur.digits.first() {
                None => return Ok(ActOutcome::UndefinedAtDepth),
                Some(&d) if d != id => return Ok(ActOutcome::Empty),
                Some(_) => Cylinder { digits: cur.digits[1..].to_vec() },
            },
            Letter::Delta(x) => act(endo, &cur, &x.inverse())?,
        };
    }
    Ok(ActOutcome::Cylinder(cur))
}

/// Source of digits for deepening cylinders.
#[derive(Clone, Debug)]
pub enum DigitStream {
    /// The R-sequence of a group element.
    RSequence(GroupElement),
    /// A fixed periodic pattern (e.g. all identity digits).
    Periodic(Vec<usize>),
    /// Uniform digits from a seeded ChaCha stream.
    Random(u64),
}

impl DigitStream {
    pub fn take(&self, endo: &Endomorphism, depth: usize) -> Result<Vec<usize>> {
        match self {
            DigitStream::RSequence(x) => Ok(endo.r_sequence(x, depth)?.digits),
            DigitStream::Periodic(p) if p.is_empty() => Ok(vec![endo.identity_digit(); depth]),
            DigitStream::Periodic(p) => Ok(p.iter().copied().cycle().take(depth).collect()),
            DigitStream::Random(seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                Ok((0..depth).map(|_| rng.random_range(0..endo.base())).collect())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Separation {
    /// `Bₙ·U` is empty or disjoint from `Bₙ` at this depth.
    At(usize),
    Undecided,
}

/// Deepen `Bₙ` along the stream until `Bₙ ∩ Bₙ·U = ∅`.
pub fn separation_check(
    endo: &Endomorphism,
    word: &[Letter],
    seed: &DigitStream,
    max_depth: usize,
) -> Result<Separation> {
    if word_normalize(endo, word)?.classify() == Classification::Projection {
        return Err(Error::Precondition("separation needs a non-projection word".into()));
    }
    let digits = seed.take(endo, max_depth)?;
    for n in 0..=max_depth {
        let b = Cylinder { digits: digits[..n].to_vec() };
        match semigroup_act(endo, word, &b)? {
            ActOutcome::Empty => return Ok(Separation::At(n)),
            ActOutcome::Cylinder(image) if !image.meets(&b) => return Ok(Separation::At(n)),
            _ => {}
        }
    }
    Ok(Separation::Undecided)
}

/// Cylinder census of an action: how many depth-`n` cylinders map to each.
pub fn action_census(endo: &Endomorphism, n: usize, y: &GroupElement, cap: u128) -> Result<BTreeMap<Cylinder, usize>> {
    let base = endo.base();
    let mut out = BTreeMap::new();
    for i in 0..checked_size(base, n, cap)? {
        let c = Cylinder { digits: digits_of_index(i, base, n) };
        *out.entry(act(endo, &c, y)?).or_insert(0) += 1;
    }
    Ok(out)
}
