//! Subcommand dispatch and the JSON envelope shared by every command.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use pcentral::chiconstruct::{
    build_f, f_differential_rank, starred_entries_nonzero, verify_cyclic_spectrum, TParameters,
};
use pcentral::exactmath::{parse_rational, FieldKind, Scalar};
use pcentral::harmonic::{dft_decompose, DiagonalVector};
use pcentral::imagedim::{classify_image, differential_rank, theorem_bound, ImageOptions};
use pcentral::matunits::{
    classify_value, evaluate_on_units, iota_sum, scan_units, ScanOptions, UnitAssignment, UnitValueClass,
};
use pcentral::ncpoly::{parse_auto, NcPolynomial};
use pcentral::powercentral::{order_search, power_central_probe, OrderSearchOptions, PowerError, ProbeConfig};
use pcentral::quaternion::{build_square_central, verify_square_central_form, QuatMatrix2, Quaternion};
use pcentral::rng::{random_point, trial_rng};

pub mod selftest;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser, Debug)]
#[command(
    name = "pcentral",
    version,
    about = "Exact experiments on multilinear polynomial images in M_n"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Number of random trials; each command has its own default.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: Option<u64>,
    /// Random entries are drawn from [-box, box].
    #[arg(long = "box", global = true, default_value_t = 10, value_parser = clap::value_parser!(i64).range(1..))]
    pub sample_box: i64,
    /// Maximum number of unit assignments a scan may visit.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    pub budget: u64,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    pub json_out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// PI / Central / NonCentral verdict and a dimension lower bound.
    Classify(PolyArgs),
    /// Exhaustive matrix-unit scan.
    ScanUnits {
        #[command(flatten)]
        poly: PolyArgs,
        /// Sample evenly spaced assignments when the budget is exceeded.
        #[arg(long)]
        allow_sampling: bool,
    },
    /// Differential ranks at random points.
    ImageDim(PolyArgs),
    /// Probe a single exponent with --nu, or search the order up to --nu-max.
    PowerCentral {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long)]
        nu: Option<usize>,
        #[arg(long, default_value_t = 8)]
        nu_max: usize,
        /// Probe every exponent, ignoring the gcd and ν = n filters.
        #[arg(long)]
        no_filters: bool,
    },
    /// The χ-orbit map f at a unit assignment, e.g. --base "1,1;1,2".
    ChiF {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long)]
        base: Option<String>,
    },
    /// Pairing identities of the harmonic bases; --diag decomposes a diagonal.
    Harmonic {
        #[arg(long)]
        n: usize,
        /// Comma-separated entries in Q(e), e.g. "1,e,e^2,-1".
        #[arg(long)]
        diag: Option<String>,
    },
    /// Square-central quaternion matrix from a, b, alpha.
    #[command(name = "verify-2pol0")]
    Verify2pol0 {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
    },
    /// Run every acceptance criterion.
    Selftest,
}

#[derive(Args, Debug, Clone)]
pub struct PolyArgs {
    /// Builtin name (comm, s2, s3, s4, c4m) or text like "x1*x2 - x2*x1".
    #[arg(long, allow_hyphen_values = true)]
    pub poly: String,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub n: u64,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Classify(_) => "classify",
            Command::ScanUnits { .. } => "scan-units",
            Command::ImageDim(_) => "image-dim",
            Command::PowerCentral { .. } => "power-central",
            Command::ChiF { .. } => "chi-f",
            Command::Harmonic { .. } => "harmonic",
            Command::Verify2pol0 { .. } => "verify-2pol0",
            Command::Selftest => "selftest",
        }
    }
}

/// Everything `main` needs to finish the process; `json` goes to stdout unless `json_out` is set.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub code: i32,
    pub json: String,
    pub summary: String,
    pub json_out: Option<PathBuf>,
}

#[derive(Debug)]
enum Failure {
    /// Exit 2.
    Usage {
        kind: &'static str,
        message: String,
        position: Option<usize>,
    },
    /// Exit 1.
    Invariant { kind: &'static str, message: String },
}

impl Failure {
    fn parse(message: impl ToString, position: Option<usize>) -> Self {
        Failure::Usage {
            kind: "parse",
            message: message.to_string(),
            position,
        }
    }

    fn usage(message: impl ToString) -> Self {
        Failure::Usage {
            kind: "usage",
            message: message.to_string(),
            position: None,
        }
    }
}

struct Report {
    config: Value,
    result: Value,
    warnings: Vec<String>,
    summary: String,
    /// Set when the command ran but an invariant failed (exit 1 with a full report).
    failed: bool,
}

pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(
                e.kind(),
                ErrorKind::DisplayHelp
                    | ErrorKind::DisplayVersion
                    | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand
            ) {
                return Outcome {
                    code: 0,
                    json: String::new(),
                    summary: e.to_string(),
                    json_out: None,
                };
            }
            let rendered = e.render().to_string();
            let head = rendered.split("\n\n").next().unwrap_or_default();
            let message = head
                .split_whitespace()
                .collect::<Vec<_>>()
                .join(" ")
                .trim_start_matches("error: ")
                .to_string();
            let body = json!({
                "command": Value::Null,
                "error": {"kind": "usage", "message": message, "position": Value::Null},
                "version": VERSION,
            });
            return Outcome {
                code: 2,
                json: pretty(&body),
                summary: e.to_string(),
                json_out: None,
            };
        }
    };
    let command = cli.command.name();
    let json_out = cli.global.json_out.clone();
    match execute(&cli) {
        Ok(report) => {
            let body = json!({
                "command": command,
                "config": report.config,
                "result": report.result,
                "warnings": report.warnings,
                "version": VERSION,
            });
            Outcome {
                code: if report.failed { 1 } else { 0 },
                json: pretty(&body),
                summary: report.summary,
                json_out,
            }
        }
        Err(failure) => {
            let (code, kind, message, position) = match failure {
                Failure::Usage {
                    kind,
                    message,
                    position,
                } => (2, kind, message, position),
                Failure::Invariant { kind, message } => (1, kind, message, None),
            };
            let body = json!({
                "command": command,
                "error": {"kind": kind, "message": message, "position": position},
                "version": VERSION,
            });
            Outcome {
                code,
                json: pretty(&body),
                summary: format!("{command}: {message}"),
                json_out,
            }
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn parse_poly(args: &PolyArgs) -> Result<NcPolynomial, Failure> {
    parse_auto(&args.poly).map_err(|e| Failure::parse(&e, e.position()))
}

fn base_config(g: &GlobalArgs, trials: u64) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("seed".into(), json!(g.seed));
    m.insert("box".into(), json!(g.sample_box));
    m.insert("trials".into(), json!(trials));
    m.insert("budget".into(), json!(g.budget));
    m
}

fn poly_config(g: &GlobalArgs, trials: u64, p: &NcPolynomial, n: usize) -> serde_json::Map<String, Value> {
    let mut m = base_config(g, trials);
    m.insert("poly".into(), json!(p.render()));
    m.insert("n".into(), json!(n));
    m
}

fn scan_opts(g: &GlobalArgs, allow_sampling: bool) -> ScanOptions {
    ScanOptions {
        budget: g.budget,
        allow_sampling,
    }
}

fn execute(cli: &Cli) -> Result<Report, Failure> {
    let g = &cli.global;
    match &cli.command {
        Command::Classify(args) => {
            let p = parse_poly(args)?;
            let n = args.n as usize;
            let trials = g.trials.unwrap_or(8);
            let opts = ImageOptions {
                trials: trials as usize,
                seed: g.seed,
                sample_box: g.sample_box,
                scan: scan_opts(g, false),
            };
            let report = classify_image(&p, n, opts).map_err(Failure::usage)?;
            let mut warnings = report.warnings.clone();
            let failed = report.warnings.iter().any(|w| w.starts_with("below-theorem-bound"));
            if failed {
                warnings.push("invariant failure: sampled rank stayed below the proven bound".into());
            }
            Ok(Report {
                summary: format!("{:?}, dim >= {}", report.classification, report.dim_lower_bound),
                config: poly_config(g, trials, &p, n).into(),
                result: to_value(&report),
                warnings,
                failed,
            })
        }
        Command::ScanUnits { poly, allow_sampling } => {
            let p = parse_poly(poly)?;
            let n = poly.n as usize;
            let report = scan_units(&p, n, scan_opts(g, *allow_sampling)).map_err(Failure::usage)?;
            let mut config = poly_config(g, g.trials.unwrap_or(0), &p, n);
            config.remove("trials");
            config.insert("allow_sampling".into(), json!(allow_sampling));
            let warnings = if report.exhaustive {
                vec![]
            } else {
                vec!["scan was sampled, not exhaustive".to_string()]
            };
            Ok(Report {
                summary: format!(
                    "{} assignments: {} zero, {} diagonal ({} scalar), {} unit multiples",
                    report.total, report.zero, report.diagonal, report.diagonal_scalar, report.unit_multiple
                ),
                config: config.into(),
                result: to_value(&report),
                warnings,
                failed: false,
            })
        }
        Command::ImageDim(args) => {
            let p = parse_poly(args)?;
            let n = args.n as usize;
            if !p.is_multilinear() {
                return Err(Failure::usage("polynomial is not multilinear"));
            }
            let trials = g.trials.unwrap_or(8);
            let mut ranks = Vec::new();
            for trial in 0..trials {
                let mut rng = trial_rng(g.seed, "classify-image", trial);
                let point = random_point(&mut rng, p.num_vars(), n, g.sample_box);
                ranks.push(differential_rank(&p, &point).map_err(Failure::usage)?);
            }
            let best = ranks.iter().copied().max().unwrap_or(0);
            Ok(Report {
                summary: format!("max differential rank {best} over {trials} points"),
                config: poly_config(g, trials, &p, n).into(),
                result: json!({"ranks": ranks, "dim_lower_bound": best, "theorem_bound": theorem_bound(n)}),
                warnings: vec![],
                failed: false,
            })
        }
        Command::PowerCentral {
            poly,
            nu,
            nu_max,
            no_filters,
        } => {
            let p = parse_poly(poly)?;
            let n = poly.n as usize;
            let trials = g.trials.unwrap_or(20);
            let probe = ProbeConfig {
                trials: trials as usize,
                seed: g.seed,
                sample_box: g.sample_box,
            };
            let mut config = poly_config(g, trials, &p, n);
            if let Some(nu) = nu {
                config.insert("nu".into(), json!(nu));
                let verdict = power_central_probe(&p, n, *nu, &probe).map_err(Failure::usage)?;
                return Ok(Report {
                    summary: format!("nu = {nu}: {}", verdict_name(&to_value(&verdict))),
                    config: config.into(),
                    result: to_value(&verdict),
                    warnings: vec![],
                    failed: false,
                });
            }
            config.insert("nu_max".into(), json!(nu_max));
            config.insert("filters".into(), json!(!no_filters));
            let opts = OrderSearchOptions {
                nu_max: *nu_max,
                probe,
                filters: !no_filters,
                scan: scan_opts(g, false),
            };
            match order_search(&p, n, &opts) {
                Ok(report) => Ok(Report {
                    summary: match report.order {
                        Some(nu) => format!("order {nu}"),
                        None => format!("no order up to {nu_max}"),
                    },
                    config: config.into(),
                    warnings: report.notes.clone(),
                    result: to_value(&report),
                    failed: false,
                }),
                Err(e @ PowerError::TheoremContradiction { .. }) => Err(Failure::Invariant {
                    kind: "theorem_contradiction",
                    message: e.to_string(),
                }),
                Err(e) => Err(Failure::usage(e)),
            }
        }
        Command::ChiF { poly, base } => chi_f(g, poly, base.as_deref()),
        Command::Harmonic { n, diag } => harmonic(g, *n, diag.as_deref()),
        Command::Verify2pol0 { a, b, alpha } => verify_2pol0(g, a, b, alpha),
        Command::Selftest => {
            let results = selftest::run_all(g.seed);
            let passed = results.iter().all(|r| r.passed);
            let summary = results
                .iter()
                .map(selftest::CriterionResult::line)
                .collect::<Vec<_>>()
                .join("\n");
            Ok(Report {
                config: base_config(g, 0).into(),
                result: json!({"passed": passed, "criteria": to_value(&results)}),
                warnings: vec![],
                summary,
                failed: !passed,
            })
        }
    }
}

fn verdict_name(v: &Value) -> String {
    v.get("verdict").and_then(Value::as_str).unwrap_or("?").to_string()
}

/// "1,1;1,2" → (e₁₁, e₁₂).
fn parse_base(text: &str, n: usize) -> Result<UnitAssignment, Failure> {
    let mut pairs = Vec::new();
    let mut offset = 0;
    for chunk in text.split(';') {
        let parts: Vec<&str> = chunk.split(',').map(str::trim).collect();
        let bad = || {
            Failure::parse(
                format!("expected `i,j` with 1 <= i, j <= {n}, got `{chunk}`"),
                Some(offset),
            )
        };
        if parts.len() != 2 {
            return Err(bad());
        }
        let i: usize = parts[0].parse().map_err(|_| bad())?;
        let j: usize = parts[1].parse().map_err(|_| bad())?;
        if !(1..=n).contains(&i) || !(1..=n).contains(&j) {
            return Err(bad());
        }
        pairs.push((i, j));
        offset += chunk.len() + 1;
    }
    Ok(UnitAssignment::from_pairs(n, &pairs))
}

fn chi_f(g: &GlobalArgs, poly: &PolyArgs, base: Option<&str>) -> Result<Report, Failure> {
    let p = parse_poly(poly)?;
    let n = poly.n as usize;
    let trials = g.trials.unwrap_or(8);
    let mut warnings = Vec::new();
    let base = match base {
        Some(text) => parse_base(text, n)?,
        None => {
            let scan = scan_units(
                &p,
                n,
                ScanOptions {
                    budget: g.budget,
                    allow_sampling: true,
                },
            )
            .map_err(Failure::usage)?;
            let witness = scan
                .unit_multiple_witness(1, 2)
                .or(scan.diag_nonscalar_witness.as_ref())
                .ok_or_else(|| {
                    Failure::usage("no assignment with value a multiple of e_12 or a non-scalar diagonal; pass --base")
                })?;
            warnings.push(format!("base chosen from unit scan (assignment #{})", witness.index));
            witness.assignment.clone()
        }
    };
    if base.units.len() != p.num_vars() {
        return Err(Failure::usage(format!(
            "base has {} units but the polynomial has {} variables",
            base.units.len(),
            p.num_vars()
        )));
    }
    let value = evaluate_on_units(&p, &base).map_err(Failure::usage)?;
    let class = classify_value(&value).map_err(Failure::usage)?;
    let mut rng = trial_rng(g.seed, "chi-f", 0);
    let t = TParameters::random(&mut rng, n, p.num_vars(), g.sample_box);
    let f = build_f(&p, &base, &t).map_err(Failure::usage)?;
    let spectrum = verify_cyclic_spectrum(&f).map_err(Failure::usage)?;
    let delta = match class {
        UnitValueClass::Zero | UnitValueClass::Diagonal { .. } => {
            Some(f_differential_rank(&p, &base, trials as usize, g.seed).map_err(Failure::usage)?)
        }
        UnitValueClass::UnitMultiple { .. } => None,
    };
    let mut config = poly_config(g, trials, &p, n);
    config.insert("base".into(), to_value(&base));
    Ok(Report {
        summary: format!(
            "iota sum {}, cyclic spectrum {}",
            iota_sum(&base).rem_euclid(n as i64),
            spectrum.holds
        ),
        config: config.into(),
        result: json!({
            "base_value": to_value(&class),
            "iota_sum_mod_n": iota_sum(&base).rem_euclid(n as i64),
            "f": to_value(&f),
            "char_poly": to_value(&spectrum.char_poly),
            "cyclic_spectrum": spectrum.holds,
            "starred_entries_nonzero": starred_entries_nonzero(&f),
            "alpha": spectrum.alpha.as_ref().map(to_value),
            "delta": delta,
        }),
        warnings,
        failed: false,
    })
}

fn harmonic(g: &GlobalArgs, n: usize, diag: Option<&str>) -> Result<Report, Failure> {
    if n < 2 {
        return Err(Failure::usage("n must be at least 2"));
    }
    let q_ok = selftest::q_identity_failure(n).map_err(Failure::usage)?.is_none();
    let r_ok = if n == 5 {
        Some(selftest::r_identity_failure().map_err(Failure::usage)?.is_none())
    } else {
        None
    };
    let decomposition = match diag {
        None => None,
        Some(text) => {
            let mut entries = Vec::new();
            let mut offset = 0;
            for part in text.split(',') {
                let s = Scalar::parse(part.trim(), FieldKind::Cyclotomic(n))
                    .map_err(|e| Failure::parse(e.message, Some(offset + e.position)))?;
                entries.push(s);
                offset += part.len() + 1;
            }
            let d = DiagonalVector::new(n, entries).map_err(Failure::usage)?;
            Some(to_value(&dft_decompose(&d)))
        }
    };
    let failed = !q_ok || r_ok == Some(false);
    let mut config = base_config(g, 0);
    config.remove("trials");
    config.insert("n".into(), json!(n));
    Ok(Report {
        summary: match r_ok {
            Some(r) => format!("q identity {q_ok}, r identity {r}"),
            None => format!("q identity {q_ok}"),
        },
        config: config.into(),
        result: json!({"q_identity": q_ok, "r_identity": r_ok, "decomposition": decomposition}),
        warnings: vec![],
        failed,
    })
}

fn verify_2pol0(g: &GlobalArgs, a: &str, b: &str, alpha: &str) -> Result<Report, Failure> {
    let pq = |s: &str| {
        Quaternion::parse(s).map_err(|e| match e {
            pcentral::quaternion::QuaternionError::Parse { position, message } => {
                Failure::parse(message, Some(position))
            }
            other => Failure::usage(other),
        })
    };
    let (qa, qb) = (pq(a)?, pq(b)?);
    let alpha_q = parse_rational(alpha).map_err(|e| Failure::parse(e.message, Some(e.position)))?;
    let m = build_square_central(&qa, &qb, &alpha_q).map_err(Failure::usage)?;
    let square = m.square();
    let square_ok = square == QuatMatrix2::scalar(&alpha_q);
    let form = verify_square_central_form(&m).map_err(Failure::usage)?;
    let failed = !square_ok || !form.is_form || form.alpha.as_ref() != Some(&alpha_q);
    let mut config = base_config(g, 0);
    config.remove("trials");
    config.insert("a".into(), json!(qa.to_string()));
    config.insert("b".into(), json!(qb.to_string()));
    config.insert("alpha".into(), json!(pcentral::exactmath::render_rational(&alpha_q)));
    Ok(Report {
        summary: format!("A^2 = alpha*I: {square_ok}"),
        config: config.into(),
        result: json!({"A": to_value(&m), "A_squared": to_value(&square), "square_is_alpha_identity": square_ok, "form": to_value(&form)}),
        warnings: vec![],
        failed,
    })
}
