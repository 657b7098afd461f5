use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use endomorph::config::{Format, SpecConfig};
use endomorph::dynamics::{
    act, action_census, odometer_check, psi_fiber_census, separation_check, stabilizer_membership, Cylinder,
    DigitStream, Separation,
};
use endomorph::fn_algebra::{alpha_star, alpha_star_decay, iota_to, FnElement};
use endomorph::ktheory::{identify_limit, pv_assemble, smith_normal_form, Identification, IntMatrix, StationaryLimit};
use endomorph::numerics::{check_relations, norm_lower_bound, TruncatedRep};
use endomorph::ring::GroupRingElement;
use endomorph::symbolic::{e_full, letters_to_string, parse_letters, word_normalize, word_to_fn};
use endomorph::transversal::{normality_report, purity_report, Transversal};
use endomorph::verify::run_suite;
use endomorph::{Endomorphism, Error};

#[derive(Parser)]
#[command(name = "endomorph", version, about = "Exact computations for the C*-algebra of a group endomorphism")]
struct Cli {
    /// TOML run configuration; defaults to the integers with multiplier 2.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Largest enumeration (transversal, ball, census) allowed.
    #[arg(long, global = true)]
    cap: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the transversal R_n.
    Transversal {
        n: usize,
        /// Read and write tables through this cache directory.
        #[arg(long)]
        cache_dir: Option<PathBuf>,
    },
    /// Write x = a^n(g) * r with r in R_n.
    Decompose { #[arg(allow_hyphen_values = true)] x: String, n: usize },
    /// First d digits of the R-sequence of x.
    Rseq { #[arg(allow_hyphen_values = true)] x: String, d: usize },
    /// Exclusion depths over a ball.
    Purity {
        #[arg(long)]
        radius: Option<u64>,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Search for a conjugate leaving a^n(G).
    Normality {
        n: usize,
        #[arg(long, default_value_t = 4)]
        radius: u64,
    },
    /// Image of a group-ring element or balanced word at level n.
    Iota { #[arg(allow_hyphen_values = true)] a: String, n: usize },
    /// m-fold alpha-star, and the vanishing depth of trace-zero elements.
    Alphastar { #[arg(allow_hyphen_values = true)] a: String, m: usize },
    #[command(subcommand)]
    Dynamics(DynamicsCmd),
    #[command(subcommand)]
    Ktheory(KtheoryCmd),
    #[command(subcommand)]
    Symbolic(SymbolicCmd),
    #[command(subcommand)]
    Numerics(NumericsCmd),
    /// Run every check for the configured endomorphism.
    Verify,
}

#[derive(Subcommand)]
enum DynamicsCmd {
    /// Move a cylinder such as [1,0,2] by x.
    Act { cylinder: String, #[arg(allow_hyphen_values = true)] x: String },
    /// Compare the action of 1 with add-with-carry at a depth.
    Odometer { depth: usize },
    /// Whether y fixes the cylinder, by action and by conjugation.
    Stabilizer { cylinder: String, #[arg(allow_hyphen_values = true)] y: String },
    /// Fiber census of Psi_k^n.
    Psi { k: usize, n: usize },
    /// Where the depth-n cylinders go under y.
    Census { n: usize, #[arg(allow_hyphen_values = true)] y: String },
    /// Depth at which a semigroup word separates a cylinder from its image.
    Separate {
        #[arg(allow_hyphen_values = true)]
        word: String,
        /// `random`, `identity` or `rseq:<x>`.
        #[arg(long, default_value = "random")]
        stream: String,
        #[arg(long)]
        depth: Option<usize>,
    },
}

#[derive(Subcommand)]
enum KtheoryCmd {
    /// Smith normal form of a matrix (default: K0 map minus the identity).
    Snf {
        #[arg(long)]
        matrix: Option<String>,
    },
    /// Identify the stationary limit of a matrix (default: the K0 map).
    Identify {
        #[arg(long)]
        matrix: Option<String>,
    },
    /// Assemble K-groups of the crossed product by the shift.
    Pv,
}

#[derive(Subcommand)]
enum SymbolicCmd {
    /// Normal form of a word in S, S*, d(x).
    Normalize { #[arg(allow_hyphen_values = true)] word: String },
    /// The gauge-invariant part of the normal form.
    Ef { #[arg(allow_hyphen_values = true)] word: String },
    /// A balanced word as a matrix at level n.
    Tofn { #[arg(allow_hyphen_values = true)] word: String, n: usize },
}

#[derive(Subcommand)]
enum NumericsCmd {
    /// Check the defining relations in the truncated regular representation.
    Relations {
        #[arg(long)]
        radius: Option<u64>,
    },
    /// Power-iteration lower bound for the norm of a group-ring element.
    Norm {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(long)]
        radius: Option<u64>,
        #[arg(long, default_value_t = 500)]
        iterations: usize,
    },
}

struct Report {
    text: String,
    json: Value,
    passed: bool,
}

impl Report {
    fn ok(text: String, json: Value) -> Self {
        Report { text, json, passed: true }
    }
}

fn parse_matrix(raw: &str) -> endomorph::Result<IntMatrix> {
    let rows: Vec<Vec<i64>> =
        serde_json::from_str(raw).map_err(|e| Error::Malformed { token: format!("{raw} ({e})") })?;
    IntMatrix::from_rows(&rows)
}

/// A letter word when it mentions `S`, otherwise a group-ring element.
fn parse_operand(cfg: &SpecConfig, raw: &str, n: usize) -> endomorph::Result<FnElement> {
    let endo = &cfg.endo;
    if raw.split_whitespace().any(|t| t == "S" || t == "S*") {
        let w = word_normalize(endo, &parse_letters(endo.family(), raw)?)?;
        word_to_fn(endo, &w, n)
    } else {
        let a = GroupRingElement::parse(endo.family(), raw)?;
        iota_to(endo, &FnElement::from_ring(a), n)
    }
}

fn stream_of(endo: &Endomorphism, raw: &str, seed: u64) -> endomorph::Result<DigitStream> {
    match raw {
        "random" => Ok(DigitStream::Random(seed)),
        "identity" => Ok(DigitStream::Periodic(vec![])),
        _ => match raw.strip_prefix("rseq:") {
            Some(x) => Ok(DigitStream::RSequence(endo.parse(x)?)),
            None => Err(Error::Malformed { token: raw.to_string() }),
        },
    }
}

fn run(cfg: &SpecConfig, command: Command) -> endomorph::Result<Report> {
    let endo = &cfg.endo;
    let cap = cfg.cap;
    Ok(match command {
        Command::Transversal { n, cache_dir } => {
            let t = match cache_dir {
                Some(dir) => Transversal::cached(endo, n, cap, &dir)?,
                None => Transversal::build(endo, n, cap)?,
            };
            let reps: Vec<String> = t.reps().iter().map(ToString::to_string).collect();
            Report::ok(t.to_table().trim_end().to_string(), json!({ "level": n, "reps": reps }))
        }
        Command::Decompose { x, n } => {
            let x = endo.parse(&x)?;
            let d = endo.decompose(&x, n)?;
            let r = endo.element_from_digits(&d.digits);
            let digits: Vec<String> = d.digits.iter().map(ToString::to_string).collect();
            Report::ok(
                format!("{x} = a^{n}({}) * r({r}) ; digits ({})", d.quotient, digits.join(",")),
                json!({ "x": x.to_string(), "n": n, "quotient": d.quotient.to_string(), "r": r.to_string(), "digits": d.digits }),
            )
        }
        Command::Rseq { x, d } => {
            let x = endo.parse(&x)?;
            let s = endo.r_sequence(&x, d)?;
            let reps: Vec<String> = s.digits.iter().map(|&i| endo.transversal()[i].to_string()).collect();
            Report::ok(
                format!("R({x}) = ({}) ...", reps.join(",")),
                json!({ "x": x.to_string(), "digits": s.digits, "reps": reps }),
            )
        }
        Command::Purity { radius, depth } => {
            let r = purity_report(endo, radius.unwrap_or(cfg.radius), depth.unwrap_or(cfg.max_depth), cap)?;
            let json = json!({ "undecided": r.undecided(), "collisions": r.collisions.len(), "elements": r.outcomes.len() });
            Report { text: r.to_string(), json, passed: r.passed() }
        }
        Command::Normality { n, radius } => {
            let r = normality_report(endo, n, radius, cap)?;
            let witness = r.witness.as_ref().map(|(g, x, c)| vec![g.to_string(), x.to_string(), c.to_string()]);
            let json = json!({ "level": n, "normal": r.passed(), "checked": r.checked, "witness": witness });
            // a non-normal image is a finding about the group, not a failed check
            Report::ok(r.to_string(), json)
        }
        Command::Iota { a, n } => {
            let m = parse_operand(cfg, &a, n)?;
            Report::ok(m.to_matrix_string(), json!({ "level": n, "matrix": m.to_matrix_string() }))
        }
        Command::Alphastar { a, m } => {
            let a = GroupRingElement::parse(endo.family(), &a)?;
            let mut cur = a.clone();
            for _ in 0..m {
                cur = alpha_star(endo, &cur);
            }
            let decay = if a.trace() == endomorph::ring::coeff(0) {
                alpha_star_decay(endo, &a, cfg.max_depth.max(m))?
            } else {
                None
            };
            let mut text = format!("alpha*^{m}({a}) = {cur}");
            if let Some(k) = decay {
                text.push_str(&format!("\nvanishes from m = {k}"));
            }
            Report::ok(text, json!({ "m": m, "value": cur.to_string(), "vanishes_at": decay }))
        }
        Command::Dynamics(cmd) => dynamics(cfg, cmd)?,
        Command::Ktheory(cmd) => ktheory(cfg, cmd)?,
        Command::Symbolic(cmd) => {
            let (word, level) = match &cmd {
                SymbolicCmd::Normalize { word } | SymbolicCmd::Ef { word } => (word, None),
                SymbolicCmd::Tofn { word, n } => (word, Some(*n)),
            };
            let letters = parse_letters(endo.family(), word)?;
            let nf = word_normalize(endo, &letters)?;
            match (cmd, level) {
                (SymbolicCmd::Normalize { .. }, _) => Report::ok(
                    format!("{} = {nf}", letters_to_string(&letters)),
                    json!({ "word": letters_to_string(&letters), "normal_form": nf.to_string(), "class": format!("{:?}", nf.classify()) }),
                ),
                (SymbolicCmd::Ef { .. }, _) => {
                    let ef = nf.ef_project();
                    Report::ok(format!("E_F({}) = {ef}", letters_to_string(&letters)), json!({ "ef": ef.to_string() }))
                }
                (_, Some(n)) => {
                    let m = word_to_fn(endo, &nf, n)?;
                    let e = e_full(endo, &nf, n)?;
                    Report::ok(
                        format!("{}\nE = {}", m.to_matrix_string(), e.to_matrix_string()),
                        json!({ "matrix": m.to_matrix_string(), "expectation": e.to_matrix_string() }),
                    )
                }
                _ => unreachable!("tofn always carries a level"),
            }
        }
        Command::Numerics(NumericsCmd::Relations { radius }) => {
            let rep = TruncatedRep::new(endo, radius.unwrap_or(cfg.radius), cap)?;
            let sample = endo.ball(2, cap)?;
            let r = check_relations(&rep, &sample)?;
            let json = json!({ "passed": r.passed(), "coverage": r.coverage() });
            Report { text: r.to_string(), json, passed: r.passed() }
        }
        Command::Numerics(NumericsCmd::Norm { a, radius, iterations }) => {
            let x = GroupRingElement::parse(endo.family(), &a)?;
            let radius = radius.unwrap_or(cfg.radius);
            let rep = TruncatedRep::new(endo, radius, cap)?;
            let bound = norm_lower_bound(&rep, &x, iterations);
            Report::ok(
                format!("||{x}|| >= {bound:.12} (radius {radius}, l1 norm {})", x.l1_norm()),
                json!({ "element": x.to_string(), "radius": radius, "lower_bound": bound, "l1": x.l1_norm() }),
            )
        }
        Command::Verify => {
            let r = run_suite(cfg);
            Report { text: r.to_string(), json: serde_json::to_value(&r).expect("serializable"), passed: r.passed() }
        }
    })
}

fn dynamics(cfg: &SpecConfig, cmd: DynamicsCmd) -> endomorph::Result<Report> {
    let endo = &cfg.endo;
    Ok(match cmd {
        DynamicsCmd::Act { cylinder, x } => {
            let c = Cylinder::parse(endo, &cylinder)?;
            let x = endo.parse(&x)?;
            let moved = act(endo, &c, &x)?;
            Report::ok(format!("{c} . {x} = {moved}"), json!({ "from": c.to_string(), "to": moved.to_string() }))
        }
        DynamicsCmd::Odometer { depth } => {
            let ok = odometer_check(endo, depth, cfg.cap)?;
            Report {
                text: format!("odometer depth {depth}: {}", if ok { "PASS" } else { "FAIL" }),
                json: json!({ "depth": depth, "passed": ok }),
                passed: ok,
            }
        }
        DynamicsCmd::Stabilizer { cylinder, y } => {
            let c = Cylinder::parse(endo, &cylinder)?;
            let y = endo.parse(&y)?;
            let fixed = stabilizer_membership(endo, &c, &y)?;
            Report::ok(
                format!("{y} {} {c}", if fixed { "fixes" } else { "moves" }),
                json!({ "cylinder": c.to_string(), "y": y.to_string(), "fixed": fixed }),
            )
        }
        DynamicsCmd::Psi { k, n } => {
            let census = psi_fiber_census(endo, k, n, cfg.cap)?;
            let json = json!({ "k": k, "n": n, "fibers": census.fibers, "expected": census.expected });
            Report { text: census.to_string(), json, passed: census.uniform() }
        }
        DynamicsCmd::Census { n, y } => {
            let y = endo.parse(&y)?;
            let census = action_census(endo, n, &y, cfg.cap)?;
            let lines: Vec<String> = census.iter().map(|(c, k)| format!("{c}\t{k}")).collect();
            let json: serde_json::Map<String, Value> = census.iter().map(|(c, k)| (c.to_string(), json!(k))).collect();
            Report::ok(lines.join("\n"), Value::Object(json))
        }
        DynamicsCmd::Separate { word, stream, depth } => {
            let letters = parse_letters(endo.family(), &word)?;
            let stream = stream_of(endo, &stream, cfg.seed)?;
            let depth = depth.unwrap_or(cfg.max_depth);
            let outcome = separation_check(endo, &letters, &stream, depth)?;
            let (text, at) = match outcome {
                Separation::At(n) => (format!("separated at depth {n}"), Some(n)),
                Separation::Undecided => (format!("undecided within depth {depth}"), None),
            };
            Report { text, json: json!({ "word": word, "depth": at }), passed: at.is_some() }
        }
    })
}

/// Exact entries as strings; they can exceed the range of JSON numbers.
fn rows_json(m: &IntMatrix) -> Value {
    m.to_rows().iter().map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>()).collect()
}

fn matrix_or(raw: Option<String>, default: impl FnOnce() -> IntMatrix) -> endomorph::Result<IntMatrix> {
    raw.map_or_else(|| Ok(default()), |m| parse_matrix(&m))
}

fn ktheory(cfg: &SpecConfig, cmd: KtheoryCmd) -> endomorph::Result<Report> {
    Ok(match cmd {
        KtheoryCmd::Snf { matrix } => {
            let a = matrix_or(matrix, || cfg.k0.matrix().minus_scalar(1))?;
            let s = smith_normal_form(&a)?;
            Report::ok(
                format!("A =\n{a}\nU =\n{}\nD = diag{:?}\nV =\n{}", s.u, s.diagonal(), s.v),
                json!({
                    "a": rows_json(&a),
                    "u": rows_json(&s.u),
                    "d": s.diagonal().iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "v": rows_json(&s.v),
                }),
            )
        }
        KtheoryCmd::Identify { matrix } => {
            let limit = match matrix {
                Some(m) => StationaryLimit::new(parse_matrix(&m)?)?,
                None => cfg.k0.clone(),
            };
            match identify_limit(&limit) {
                Identification::Identified { group, certificate } => Report::ok(
                    format!("lim = {group}\ncertificate index {} (power {})", certificate.index, certificate.power),
                    json!({
                        "group": group.to_string(),
                        "descriptor": group,
                        "eigenvalues": certificate.eigenvalues.iter().map(|(l, m)| json!([l.to_string(), m])).collect::<Vec<_>>(),
                        "nonunit_lattice": rows_json(&certificate.nonunit_lattice),
                        "index": certificate.index.to_string(),
                        "power": certificate.power,
                    }),
                ),
                Identification::NotIdentified(why) => Report {
                    text: format!("not identified: {why}"),
                    json: json!({ "group": Value::Null, "reason": why }),
                    passed: false,
                },
            }
        }
        KtheoryCmd::Pv => {
            let r = pv_assemble(&cfg.k0, &cfg.k1)?;
            Report::ok(r.to_string(), serde_json::to_value(&r).expect("serializable"))
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let loaded = match &cli.config {
        Some(path) => SpecConfig::load(path),
        None => Endomorphism::integer(2).map(SpecConfig::from_endomorphism),
    };
    let mut cfg = match loaded {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(format) = cli.format {
        cfg.format = format;
    }
    if let Some(cap) = cli.cap {
        if cap == 0 {
            eprintln!("error: --cap must be positive");
            return ExitCode::from(2);
        }
        cfg.cap = cap as u128;
    }
    match run(&cfg, cli.command) {
        Ok(report) => {
            let body = match cfg.format {
                Format::Text => report.text,
                Format::Json => serde_json::to_string_pretty(&report.json).expect("serializable"),
            };
            // a closed pipe (e.g. `| head`) is not an error worth a panic
            let _ = writeln!(std::io::stdout().lock(), "{body}");
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            let usage = matches!(
                e,
                Error::Malformed { .. }
                    | Error::FamilyMismatch { .. }
                    | Error::CapExceeded { .. }
                    | Error::InvalidInput(_)
                    | Error::Config(_)
                    | Error::Precondition(_)
                    | Error::LevelMismatch { .. }
                    | Error::Unbalanced { .. }
            );
            ExitCode::from(if usage { 2 } else { 1 })
        }
    }
}
