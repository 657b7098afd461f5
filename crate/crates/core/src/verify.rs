//! Aggregated verification suite over one configuration.
//!
//! Every check is deterministic given the seed; results are sorted by id.

use std::fmt;

use num_bigint::BigInt;
use rand::Rng;
use serde::Serialize;

use crate::config::SpecConfig;
use crate::dynamics::{
    odometer_check, psi_diagram_counterexample, psi_fiber_census, separation_check, stabilizer_membership,
    tail_witness_check, Cylinder, DigitStream, Separation,
};
use crate::error::Result;
use crate::fn_algebra::{alpha_star_decay, corner_compression_check, iota, iota_closed_form, iota_tensor, FnElement};
use crate::group::{Endomorphism, Family, GroupElement};
use crate::ktheory::{identify_limit, pv_assemble, smith_normal_form, Identification, IntMatrix};
use crate::numerics::{check_relations, TruncatedRep};
use crate::ring::GroupRingElement;
use crate::sample::Sampler;
use crate::symbolic::{letters_to_string, word_normalize, Classification};
use crate::transversal::{digits_of_index, purity_report, normality_report};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Reported fact that is not a pass/fail criterion.
    Info,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub id: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Info => "INFO",
            };
            writeln!(f, "{tag} {}: {}", c.id, c.detail)?;
        }
        let failed = self.checks.iter().filter(|c| c.status == Status::Fail).count();
        write!(f, "{} checks, {failed} failed", self.checks.len())
    }
}

type Outcome = Result<(bool, String)>;

/// Exhaustive odometer comparison at `depth` (integer family only).
pub fn check_odometer(endo: &Endomorphism, depth: usize, cap: u128) -> Outcome {
    let ok = odometer_check(endo, depth, cap)?;
    Ok((ok, format!("act(., 1) vs add-with-carry over {} cylinders of depth {depth}", endo.base().pow(depth as u32))))
}

/// Fiber censuses and the truncation diagram for every `(k, n)`, `k, n ≥ 1`,
/// with `|R₁|^{n+k} ≤ limit`.
pub fn check_psi(endo: &Endomorphism, limit: u128) -> Outcome {
    let base = endo.base() as u128;
    let mut pairs = 0;
    let mut first_bad: Option<String> = None;
    let mut n = 1;
    while base.pow(n as u32 + 1) <= limit {
        let mut k = 1;
        while base.pow((n + k) as u32) <= limit {
            pairs += 1;
            let census = psi_fiber_census(endo, k, n, limit)?;
            if !census.uniform() && first_bad.is_none() {
                let (lo, hi) = census.fibers.iter().fold((usize::MAX, 0), |(lo, hi), &f| (lo.min(f), hi.max(f)));
                first_bad = Some(format!(
                    "k={k} n={n}: fibers range {lo}..{hi}, expected {}",
                    census.expected
                ));
            }
            if n >= 2 && first_bad.is_none() {
                if let Some(input) = psi_diagram_counterexample(endo, k, n, limit)? {
                    first_bad = Some(format!("k={k} n={n}: diagram fails at input {input:?}"));
                }
            }
            k += 1;
        }
        n += 1;
    }
    Ok(match first_bad {
        None => (true, format!("{pairs} (k,n) pairs uniform with commuting truncation")),
        Some(why) => (false, why),
    })
}

/// Stabilizer formula against the action, every cylinder of depth `1..=depth`
/// and every `y` in the ball.
pub fn check_stabilizers(endo: &Endomorphism, depth: usize, radius: u64, cap: u128) -> Outcome {
    let ball = endo.ball(radius, cap)?;
    let base = endo.base();
    let mut checked = 0;
    for d in 1..=depth {
        for i in 0..base.pow(d as u32) {
            let c = Cylinder::new(endo, digits_of_index(i, base, d))?;
            for y in &ball {
                stabilizer_membership(endo, &c, y)?;
                checked += 1;
            }
        }
    }
    Ok((true, format!("{checked} (cylinder, y) pairs agree")))
}

/// `R(1)` moved by `y = −1` is a tail of itself and `Ψ₁` recovers `R(−1)`.
pub fn check_tail_witness(endo: &Endomorphism) -> Outcome {
    let one = GroupElement::Int(1);
    let y = GroupElement::Int(-1);
    for depth in 2..=8 {
        let c = Cylinder::new(endo, endo.r_sequence(&one, depth)?.digits)?;
        if !tail_witness_check(endo, &c, &y, 1)? {
            return Ok((false, format!("depth {depth}: psi of R(1) is not R(-1)")));
        }
    }
    Ok((true, "R(1) with y = -1, depths 2..8".into()))
}

/// Non-projection words must separate within `max_depth` unless they vanish.
pub fn check_separation(endo: &Endomorphism, words: usize, max_depth: usize, seed: u64, cap: u128) -> Outcome {
    let mut s = Sampler::new(endo, 2, seed, cap)?;
    let (mut found, mut zero) = (0, 0);
    let mut tried = 0;
    while found + zero < words {
        tried += 1;
        let w = s.word(4);
        let class = word_normalize(endo, &w)?.classify();
        if class == Classification::Projection {
            continue;
        }
        let stream = DigitStream::Random(seed.wrapping_add(tried));
        match separation_check(endo, &w, &stream, max_depth)? {
            Separation::At(_) => found += 1,
            Separation::Undecided if class == Classification::Zero => zero += 1,
            Separation::Undecided => {
                return Ok((false, format!("{} undecided within depth {max_depth}", letters_to_string(&w))));
            }
        }
    }
    Ok((true, format!("{found} separated, {zero} annihilated")))
}

/// Random pairs at levels `0..=2`: multiplicativity, adjoints, unitality and
/// agreement of the three routes for `ι`.
pub fn check_iota(endo: &Endomorphism, pairs: usize, seed: u64, cap: u128) -> Outcome {
    let mut s = Sampler::new(endo, 3, seed, cap)?;
    for level in 0..=2 {
        let one = FnElement::identity(endo, level)?;
        if iota(endo, &one)? != FnElement::identity(endo, level + 1)? {
            return Ok((false, format!("level {level}: iota(1) != 1")));
        }
        for _ in 0..pairs {
            let a = s.fn_element(level, 3)?;
            let b = s.fn_element(level, 3)?;
            let ia = iota(endo, &a)?;
            let ib = iota(endo, &b)?;
            if iota(endo, &a.mul(&b)?)? != ia.mul(&ib)? {
                return Ok((false, format!("level {level}: iota(ab) != iota(a)iota(b) for a = {a}, b = {b}")));
            }
            if iota(endo, &a.adjoint())? != ia.adjoint() {
                return Ok((false, format!("level {level}: iota(a*) != iota(a)* for a = {a}")));
            }
            if iota_tensor(endo, &a)? != ia || iota_closed_form(endo, &a)? != ia {
                return Ok((false, format!("level {level}: iota routes disagree on {a}")));
            }
        }
    }
    Ok((true, format!("{pairs} pairs per level 0..2")))
}

/// Largest exclusion depth over the non-identity support.
pub fn predicted_decay(endo: &Endomorphism, a: &GroupRingElement, max_depth: usize) -> Result<Option<usize>> {
    let mut worst = 0;
    for g in a.support().filter(|g| !g.is_identity()) {
        match endo.exclusion_depth(g, max_depth)? {
            Some(n) => worst = worst.max(n),
            None => return Ok(None),
        }
    }
    Ok(Some(worst))
}

pub fn check_alpha_star(endo: &Endomorphism, samples: usize, max_depth: usize, seed: u64, cap: u128) -> Outcome {
    let mut s = Sampler::new(endo, 4, seed, cap)?;
    for _ in 0..samples {
        let a = s.trace_zero(4);
        let predicted = predicted_decay(endo, &a, max_depth)?;
        let got = alpha_star_decay(endo, &a, max_depth)?;
        if got != predicted {
            return Ok((false, format!("{a}: decays at {got:?}, exclusion depths predict {predicted:?}")));
        }
        if !corner_compression_check(endo, &a)? {
            return Ok((false, format!("corner compression fails for {a}")));
        }
    }
    Ok((true, format!("{samples} trace-zero elements")))
}

/// Normal forms against raw words in the truncated representation.
pub fn check_cross_validation(endo: &Endomorphism, words: usize, radius: u64, seed: u64, cap: u128) -> Outcome {
    let rep = TruncatedRep::new(endo, radius, cap)?;
    let mut s = Sampler::new(endo, 2, seed, cap)?;
    let mut columns = 0;
    for _ in 0..words {
        let w = s.word(6);
        let nf = word_normalize(endo, &w)?;
        let (ok, compared) = rep.evaluate_word(&w).agrees_on_interior(&rep.evaluate_normal(&nf));
        if !ok {
            return Ok((false, format!("{} disagrees with its normal form {nf}", letters_to_string(&w))));
        }
        columns += compared;
    }
    Ok((true, format!("{words} words, {columns} interior columns compared")))
}

pub fn check_relations_at(endo: &Endomorphism, radius: u64, cap: u128) -> Outcome {
    let rep = TruncatedRep::new(endo, radius, cap)?;
    let sample = endo.ball(2, cap)?;
    let report = check_relations(&rep, &sample)?;
    Ok((report.passed(), format!("radius {radius}, coverage {:.3}", report.coverage())))
}

/// Exact matrix products; the transforms can exceed `i128` once multiplied.
fn big(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| BigInt::from(m[(i, j)])).collect()).collect()
}

fn big_product(factors: &[&IntMatrix]) -> Vec<Vec<BigInt>> {
    let mut acc = big(factors[0]);
    for f in &factors[1..] {
        let f = big(f);
        acc = acc
            .iter()
            .map(|row| (0..f[0].len()).map(|j| row.iter().zip(&f).map(|(x, r)| x * &r[j]).sum()).collect())
            .collect();
    }
    acc
}

/// Random SNF instances: unimodular transforms, divisibility, `UAV = D`.
pub fn check_snf(samples: usize, seed: u64) -> Outcome {
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
    for _ in 0..samples {
        let (m, n) = (rng.random_range(1..=6), rng.random_range(1..=6));
        let rows: Vec<Vec<i64>> = (0..m).map(|_| (0..n).map(|_| rng.random_range(-20..=20)).collect()).collect();
        let a = IntMatrix::from_rows(&rows)?;
        let snf = smith_normal_form(&a)?;
        // an integer inverse certifies unimodularity
        let unimodular = big_product(&[&snf.u, &snf.u_inv]) == big(&IntMatrix::identity(m))
            && big_product(&[&snf.v, &snf.v_inv]) == big(&IntMatrix::identity(n));
        if !unimodular {
            return Ok((false, format!("transforms lack an integer inverse for\n{a}")));
        }
        if big_product(&[&snf.u, &a, &snf.v]) != big(&snf.d) {
            return Ok((false, format!("UAV != D for\n{a}")));
        }
        let diag = snf.diagonal();
        let off = (0..m).any(|i| (0..n).any(|j| i != j && snf.d[(i, j)] != 0));
        let chain = diag.windows(2).all(|w| if w[0] == 0 { w[1] == 0 } else { w[1] % w[0] == 0 });
        if off || !chain || diag.iter().any(|&x| x < 0) {
            return Ok((false, format!("D is not in normal form for\n{a}")));
        }
    }
    Ok((true, format!("{samples} random matrices")))
}

fn record(checks: &mut Vec<Check>, id: &str, outcome: Outcome) {
    let (status, detail) = match outcome {
        Ok((true, d)) => (Status::Pass, d),
        Ok((false, d)) => (Status::Fail, d),
        Err(e) => (Status::Fail, e.to_string()),
    };
    checks.push(Check { id: id.into(), status, detail });
}

fn info(checks: &mut Vec<Check>, id: &str, detail: String) {
    checks.push(Check { id: id.into(), status: Status::Info, detail });
}

pub fn run_suite(cfg: &SpecConfig) -> SuiteReport {
    let endo = &cfg.endo;
    let (cap, seed) = (cfg.cap, cfg.seed);
    let mut checks = Vec::new();

    if matches!(endo.family(), Family::Integer { .. }) {
        record(&mut checks, "dynamics.odometer", check_odometer(endo, 6, cap));
        record(&mut checks, "dynamics.tail_witness", check_tail_witness(endo));
    }
    record(&mut checks, "dynamics.psi", check_psi(endo, cap.min(100_000)));
    record(&mut checks, "dynamics.stabilizer", check_stabilizers(endo, 3, 6, cap));
    record(&mut checks, "dynamics.separation", check_separation(endo, 20, 12, seed, cap));
    record(&mut checks, "fn.iota", check_iota(endo, 20, seed, cap));
    record(&mut checks, "fn.alpha_star", check_alpha_star(endo, 20, cfg.max_depth.max(16), seed, cap));
    record(&mut checks, "numerics.cross_validation", check_cross_validation(endo, 100, cfg.radius, seed, cap));
    record(&mut checks, "numerics.relations", check_relations_at(endo, cfg.radius, cap));
    record(&mut checks, "ktheory.snf", check_snf(200, seed));
    match identify_limit(&cfg.k0) {
        Identification::Identified { group, .. } => info(&mut checks, "ktheory.identify", format!("lim K0 = {group}")),
        Identification::NotIdentified(why) => info(&mut checks, "ktheory.identify", format!("not identified: {why}")),
    }
    match pv_assemble(&cfg.k0, &cfg.k1) {
        Ok(pv) => info(&mut checks, "ktheory.pv", pv.to_string()),
        Err(e) => record(&mut checks, "ktheory.pv", Err(e)),
    }
    record(
        &mut checks,
        "transversal.purity",
        purity_report(endo, cfg.radius, cfg.max_depth.max(16), cap)
            .map(|r| (r.passed(), format!("{} elements, {} undecided", r.outcomes.len(), r.undecided()))),
    );
    for n in 1..=2 {
        match normality_report(endo, n, 4, cap) {
            Ok(r) => info(&mut checks, &format!("transversal.normality.{n}"), r.to_string().replace('\n', "; ")),
            Err(e) => record(&mut checks, &format!("transversal.normality.{n}"), Err(e)),
        }
    }
    checks.sort_by(|a, b| a.id.cmp(&b.id));
    SuiteReport { checks }
}
