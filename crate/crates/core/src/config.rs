//! Run configuration: a TOML file with `[group]`, `[limits]`, `[ktheory]` and
//! `[run]` sections.
//!
//! ```toml
//! [group]
//! family = "integer"      # integer | dihedral | shift
//! multiplier = 2          # integer only
//! # modulus = 2           # shift only
//! # transversal = ["0", "1"]
//!
//! [limits]
//! cap = 1000000
//! max_depth = 12
//! radius = 8
//!
//! [ktheory]
//! k0 = [[2]]
//! k1 = [[1]]              # [] is the zero group
//!
//! [run]
//! seed = 7
//! format = "text"         # text | json
//! ```
//!
//! Every error names the line it comes from.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Endomorphism, Family, DEFAULT_CAP};
use crate::ktheory::{IntMatrix, StationaryLimit};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    group: RawGroup,
    #[serde(default)]
    limits: RawLimits,
    #[serde(default)]
    ktheory: RawKtheory,
    #[serde(default)]
    run: RawRun,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGroup {
    family: String,
    multiplier: Option<i64>,
    modulus: Option<u32>,
    transversal: Option<Vec<String>>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawLimits {
    cap: Option<u64>,
    max_depth: Option<usize>,
    radius: Option<u64>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawKtheory {
    k0: Option<Vec<Vec<i64>>>,
    k1: Option<Vec<Vec<i64>>>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawRun {
    seed: Option<u64>,
    format: Option<Format>,
}

#[derive(Clone, Debug)]
pub struct SpecConfig {
    pub endo: Endomorphism,
    pub cap: u128,
    pub max_depth: usize,
    pub radius: u64,
    pub k0: StationaryLimit,
    pub k1: StationaryLimit,
    pub seed: u64,
    pub format: Format,
}

fn line_of_offset(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

/// First line assigning `key`, or the section header when the key is absent.
fn line_of_key(text: &str, section: &str, key: &str) -> usize {
    let mut in_section = false;
    let mut header = 0;
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.starts_with('[') {
            in_section = t.trim_start_matches('[').trim_end_matches(']').trim() == section;
            if in_section {
                header = i + 1;
            }
        } else if in_section && t.split('=').next().is_some_and(|k| k.trim() == key) {
            return i + 1;
        }
    }
    header
}

fn at(text: &str, section: &str, key: &str, message: impl std::fmt::Display) -> Error {
    Error::Config(format!("line {}: {message}", line_of_key(text, section, key)))
}

fn limit_from(text: &str, key: &str, rows: Option<Vec<Vec<i64>>>, default: StationaryLimit) -> Result<StationaryLimit> {
    let Some(rows) = rows else { return Ok(default) };
    if rows.is_empty() {
        return Ok(StationaryLimit::zero());
    }
    let m = IntMatrix::from_rows(&rows).map_err(|e| at(text, "ktheory", key, e))?;
    if !m.is_square() {
        return Err(at(text, "ktheory", key, format!("{key} must be square, got {}x{}", m.rows(), m.cols())));
    }
    StationaryLimit::new(m).map_err(|e| at(text, "ktheory", key, e))
}

/// Connecting maps shipped with each family when `[ktheory]` is silent.
pub fn default_k_matrices(family: Family) -> (StationaryLimit, StationaryLimit) {
    let lim = |rows: &[Vec<i64>]| StationaryLimit::new(IntMatrix::from_rows(rows).expect("rectangular")).expect("injective");
    match family {
        Family::Integer { multiplier } => (lim(&[vec![multiplier.abs()]]), lim(&[vec![1]])),
        Family::Dihedral => (lim(&[vec![3, 1, 1], vec![0, 0, 1], vec![0, 1, 0]]), StationaryLimit::zero()),
        Family::Shift { modulus } => (lim(&[vec![modulus as i64]]), StationaryLimit::zero()),
    }
}

impl SpecConfig {
    pub fn from_endomorphism(endo: Endomorphism) -> Self {
        let (k0, k1) = default_k_matrices(endo.family());
        SpecConfig { endo, cap: DEFAULT_CAP, max_depth: 12, radius: 8, k0, k1, seed: 0, format: Format::Text }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| {
            let line = e.span().map_or(0, |s| line_of_offset(text, s.start));
            Error::Config(format!("line {line}: {}", e.message()))
        })?;
        let g = raw.group;
        let family = match g.family.as_str() {
            "integer" => Family::Integer {
                multiplier: g.multiplier.ok_or_else(|| at(text, "group", "family", "integer family needs multiplier"))?,
            },
            "dihedral" => Family::Dihedral,
            "shift" => Family::Shift {
                modulus: g.modulus.ok_or_else(|| at(text, "group", "family", "shift family needs modulus"))?,
            },
            other => return Err(at(text, "group", "family", format!("unknown family `{other}`"))),
        };
        let stray = match family {
            Family::Integer { .. } => g.modulus.map(|_| "modulus"),
            Family::Dihedral => g.multiplier.map(|_| "multiplier").or(g.modulus.map(|_| "modulus")),
            Family::Shift { .. } => g.multiplier.map(|_| "multiplier"),
        };
        if let Some(key) = stray {
            return Err(at(text, "group", key, format!("`{key}` does not apply to this family")));
        }
        let key = if matches!(family, Family::Shift { .. }) { "modulus" } else { "multiplier" };
        family.validate().map_err(|e| at(text, "group", key, e))?;
        let endo = match g.transversal {
            None => Endomorphism::new(family),
            Some(reps) => reps
                .iter()
                .map(|r| family.parse(r))
                .collect::<Result<Vec<_>>>()
                .and_then(|reps| Endomorphism::with_transversal(family, reps)),
        }
        .map_err(|e| at(text, "group", "transversal", e))?;

        let cap = raw.limits.cap.unwrap_or(DEFAULT_CAP as u64);
        if cap == 0 {
            return Err(at(text, "limits", "cap", "cap must be positive"));
        }
        let max_depth = raw.limits.max_depth.unwrap_or(12);
        if max_depth == 0 {
            return Err(at(text, "limits", "max_depth", "max_depth must be positive"));
        }
        let radius = raw.limits.radius.unwrap_or(8);
        let (d0, d1) = default_k_matrices(family);
        let k0 = limit_from(text, "k0", raw.ktheory.k0, d0)?;
        let k1 = limit_from(text, "k1", raw.ktheory.k1, d1)?;
        Ok(SpecConfig {
            endo,
            cap: cap as u128,
            max_depth,
            radius,
            k0,
            k1,
            seed: raw.run.seed.unwrap_or(0),
            format: raw.run.format.unwrap_or_default(),
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }
}
