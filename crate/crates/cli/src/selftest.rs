//! The eleven acceptance criteria, runnable from `pcentral selftest` and from
//! the `acceptance` test target.

use std::time::{Duration, Instant};

use rand::Rng;
use serde::Serialize;

use pcentral::chiconstruct::{build_f, starred_entries_nonzero, verify_cyclic_spectrum, TParameters};
use pcentral::exactmath::{ratio, render_rational, Cyclotomic, FieldKind, Matrix, Scalar};
use pcentral::harmonic::{expand_in_e_basis, harmonic_vector, pairing, spectrum_pattern_even, HarmonicIndex};
use pcentral::imagedim::{classify_image, Classification, ImageOptions};
use pcentral::matunits::{evaluate_on_units, iota_sum, scan_units, ScanOptions, UnitAssignment, UnitsError};
use pcentral::ncpoly::{builtin, NcPolynomial};
use pcentral::powercentral::{
    anticommutation_check, order_search, NuStatus, OrderSearchOptions, PowerError, ProbeConfig, ProbeVerdict,
};
use pcentral::quaternion::{build_square_central, verify_square_central_form, QuatMatrix2, Quaternion};
use pcentral::rng::task_rng;

pub const CRITERIA: [(u8, &str); 11] = [
    (1, "c4m is central on M_2"),
    (2, "commutator is 2-central on M_2"),
    (3, "unit values are zero, diagonal or a unit multiple"),
    (4, "f has cyclic spectrum for n = 3..6"),
    (5, "harmonic pairing identities"),
    (6, "n = 4 expansion of alpha*q1 + beta*q2"),
    (7, "dimension lower bounds for comm and s4"),
    (8, "no multilinear power-central polynomial on M_4"),
    (9, "n = 4 pattern contrapositive for c4m"),
    (10, "square-central quaternion form"),
    (11, "anticommutation of 2-central values"),
];

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} {}: {} ({}; {:.2}s)",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.detail,
            self.elapsed.as_secs_f64()
        )
    }
}

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

pub fn run_criterion(id: u8, seed: u64) -> CriterionResult {
    let (_, name) = CRITERIA[(id - 1) as usize];
    let start = Instant::now();
    let outcome = match id {
        1 => c1_c4m_central(),
        2 => c2_comm_two_central(seed),
        3 => c3_lemma_graph(),
        4 => c4_cyclic_spectrum(seed),
        5 => c5_harmonic_identities(),
        6 => c6_n4_expansion(seed),
        7 => c7_dimension_bounds(seed),
        8 => c8_no_power_central(seed),
        9 => c9_pattern_contrapositive(seed),
        10 => c10_square_central(seed),
        11 => c11_anticommutation(seed),
        _ => Err(format!("unknown criterion {id}")),
    };
    let (passed, detail) = match outcome {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    CriterionResult {
        id,
        name,
        passed,
        detail,
        elapsed: start.elapsed(),
    }
}

pub fn run_all(seed: u64) -> Vec<CriterionResult> {
    CRITERIA.iter().map(|&(id, _)| run_criterion(id, seed)).collect()
}

fn c1_c4m_central() -> Check {
    let r = scan_units(&builtin("c4m").map_err(err)?, 2, ScanOptions::default()).map_err(err)?;
    ensure(r.exhaustive && r.total == 256, || {
        format!("scan visited {} assignments", r.total)
    })?;
    ensure(r.all_scalar(), || "a unit value is not scalar".into())?;
    ensure(!r.all_zero(), || "all unit values are zero".into())?;
    Ok(format!(
        "{} assignments, {} zero, {} nonzero scalar",
        r.total, r.zero, r.diagonal_scalar
    ))
}

fn c2_comm_two_central(seed: u64) -> Check {
    let comm = builtin("comm").map_err(err)?;
    let opts = OrderSearchOptions {
        probe: ProbeConfig {
            seed,
            ..Default::default()
        },
        ..Default::default()
    };
    let r = order_search(&comm, 2, &opts).map_err(err)?;
    ensure(r.order == Some(2), || format!("order {:?}", r.order))?;
    let limit = num_traits::pow(ratio(5, 21), 20);
    let bound = r
        .steps
        .iter()
        .find_map(|s| match &s.status {
            NuStatus::Probed {
                result: ProbeVerdict::ProbablyCentral { failure_bound, .. },
            } => Some(failure_bound.clone()),
            _ => None,
        })
        .ok_or("no probe result")?;
    ensure(bound <= limit, || {
        format!("failure bound {} exceeds (5/21)^20", render_rational(&bound))
    })?;
    Ok(format!("order 2, failure bound {}", render_rational(&bound)))
}

fn c3_lemma_graph() -> Check {
    let mut visited = 0;
    for name in ["comm", "s3", "s4", "c4m"] {
        let p = builtin(name).map_err(err)?;
        for n in [2usize, 3] {
            match scan_units(&p, n, ScanOptions::default()) {
                Ok(r) => {
                    ensure(r.exhaustive, || format!("{name} on M_{n} not exhaustive"))?;
                    visited += r.total;
                }
                Err(e @ UnitsError::LemmaGraphViolation { .. }) => return Err(format!("{name} on M_{n}: {e}")),
                Err(e) => return Err(err(e)),
            }
        }
    }
    Ok(format!("{visited} assignments, no violations"))
}

fn c4_cyclic_spectrum(seed: u64) -> Check {
    let comm = builtin("comm").map_err(err)?;
    let mut checked = 0;
    for n in 3usize..=6 {
        let base = UnitAssignment::from_pairs(n, &[(1, 1), (1, 2)]);
        ensure(iota_sum(&base).rem_euclid(n as i64) == 1, || "iota sum".into())?;
        let mut rng = task_rng(seed, &format!("acceptance-cyclic-{n}"));
        for trial in 0..20 {
            let t = TParameters::random(&mut rng, n, 2, 10);
            let f = build_f(&comm, &base, &t).map_err(err)?;
            if !starred_entries_nonzero(&f) {
                continue;
            }
            let spec = verify_cyclic_spectrum(&f).map_err(err)?;
            let mut expected = vec![Scalar::zero(); n + 1];
            expected[n] = Scalar::one();
            expected[0] = -spec.alpha.clone().unwrap_or_else(Scalar::zero);
            ensure(spec.holds && spec.char_poly == expected, || {
                format!("n = {n}, trial {trial}: char poly {:?}", spec.char_poly)
            })?;
            checked += 1;
        }
    }
    ensure(checked > 0, || "every trial had a zero starred entry".into())?;
    Ok(format!("{checked} trials with char poly lambda^n - alpha"))
}

fn eps(n: usize, k: i64) -> Scalar {
    Scalar::Cyclotomic(Cyclotomic::epsilon_pow(n, k))
}

/// First (k, s) where ⟨q_k, e_s⟩ ≠ (ε^k − 1)(1 − ε^{−s}) + n·δ_{ks}.
pub fn q_identity_failure(n: usize) -> Result<Option<(usize, usize)>, String> {
    let one = Scalar::one();
    for k in 0..n {
        let q = harmonic_vector(n, HarmonicIndex::q(k)).map_err(err)?;
        for s in 0..n {
            let es = harmonic_vector(n, HarmonicIndex::e(s)).map_err(err)?;
            let mut rhs = &(&eps(n, k as i64) - &one) * &(&one - &eps(n, -(s as i64)));
            if k == s {
                rhs = &rhs + &Scalar::from_int(n as i64);
            }
            if pairing(&q, &es).map_err(err)? != rhs {
                return Ok(Some((k, s)));
            }
        }
    }
    Ok(None)
}

/// First (k, s), s ≠ k, where ⟨r_k, e_s⟩ ≠ (ε^{2k} − 1)(1 − ε^{−2s}) in n = 5.
pub fn r_identity_failure() -> Result<Option<(usize, usize)>, String> {
    let (n, one) = (5, Scalar::one());
    for k in 0..n {
        let r = harmonic_vector(n, HarmonicIndex::r(k)).map_err(err)?;
        for s in (0..n).filter(|&s| s != k) {
            let es = harmonic_vector(n, HarmonicIndex::e(s)).map_err(err)?;
            let rhs = &(&eps(n, 2 * k as i64) - &one) * &(&one - &eps(n, -2 * s as i64));
            if pairing(&r, &es).map_err(err)? != rhs {
                return Ok(Some((k, s)));
            }
        }
    }
    Ok(None)
}

fn c5_harmonic_identities() -> Check {
    for n in [4usize, 5, 7] {
        if let Some((k, s)) = q_identity_failure(n)? {
            return Err(format!("q identity fails at n={n} k={k} s={s}"));
        }
    }
    if let Some((k, s)) = r_identity_failure()? {
        return Err(format!("r identity fails at k={k} s={s}"));
    }
    Ok("q identity for n = 4, 5, 7 and r identity for n = 5 exact".into())
}

fn cyc4(text: &str) -> Scalar {
    Scalar::parse(text, FieldKind::Cyclotomic(4)).expect("valid literal")
}

fn c6_n4_expansion(seed: u64) -> Check {
    let mut rng = task_rng(seed, "acceptance-n4-expansion");
    for trial in 0..10 {
        let alpha = Scalar::Rational(ratio(rng.gen_range(-20..=20), rng.gen_range(1..=9)));
        let beta = Scalar::Rational(ratio(rng.gen_range(-20..=20), rng.gen_range(1..=9)));
        let d = expand_in_e_basis(
            4,
            &[
                (alpha.clone(), HarmonicIndex::q(1)),
                (beta.clone(), HarmonicIndex::q(2)),
            ],
        )
        .map_err(err)?;
        let expected = [
            Scalar::zero(),
            &(&alpha * &cyc4("1/2")) - &(&beta * &cyc4("1/2 + 1/2*e")),
            &alpha * &cyc4("-1/2 + 1/2*e"),
            &(&alpha * &cyc4("1/2*e")) + &(&beta * &cyc4("-1/2 + 1/2*e")),
        ];
        ensure(d.coefficients == expected, || {
            format!("trial {trial}: alpha={alpha} beta={beta} gave {:?}", d.coefficients)
        })?;
    }
    Ok("10 random (alpha, beta) match".into())
}

fn c7_dimension_bounds(seed: u64) -> Check {
    let opts = ImageOptions {
        seed,
        ..Default::default()
    };
    let mut parts = Vec::new();
    for (name, n, want_exact, at_least) in [
        ("comm", 4, Some(15), 14),
        ("comm", 5, Some(24), 23),
        ("s4", 4, None, 14),
    ] {
        let r = classify_image(&builtin(name).map_err(err)?, n, opts).map_err(err)?;
        ensure(r.classification == Classification::NonCentral, || {
            format!("{name} on M_{n}: {:?}", r.classification)
        })?;
        ensure(r.dim_lower_bound >= at_least, || {
            format!("{name} on M_{n}: {} < {at_least}", r.dim_lower_bound)
        })?;
        if let Some(w) = want_exact {
            ensure(r.dim_lower_bound == w, || {
                format!("{name} on M_{n}: {} != {w}", r.dim_lower_bound)
            })?;
        }
        parts.push(format!("{name}@{n}: {}", r.dim_lower_bound));
    }
    Ok(parts.join(", "))
}

fn c8_no_power_central(seed: u64) -> Check {
    let mut rng = task_rng(seed, "acceptance-no-power-central");
    let opts = OrderSearchOptions {
        nu_max: 8,
        probe: ProbeConfig {
            seed,
            ..Default::default()
        },
        ..Default::default()
    };
    let mut accepted = 0;
    let mut drawn = 0;
    while accepted < 50 {
        drawn += 1;
        let p = NcPolynomial::random_multilinear(&mut rng, 3, 3);
        let scan = scan_units(&p, 4, ScanOptions::default()).map_err(err)?;
        if scan.all_zero() || scan.all_scalar() {
            continue;
        }
        accepted += 1;
        match order_search(&p, 4, &opts) {
            Ok(r) => {
                ensure(r.order.is_none(), || format!("{p}: order {:?}", r.order))?;
                let witnessed = r.steps.iter().any(|s| {
                    matches!(
                        &s.status,
                        NuStatus::Probed {
                            result: ProbeVerdict::NotCentral { .. }
                        }
                    )
                });
                ensure(witnessed, || format!("{p}: nu = 4 probe has no witness"))?;
            }
            Err(e @ PowerError::TheoremContradiction { .. }) => return Err(format!("{p}: {e}")),
            Err(e) => return Err(err(e)),
        }
    }
    Ok(format!(
        "{accepted} polynomials ({drawn} drawn), each with an exact nu = 4 witness, 0 contradictions"
    ))
}

fn c9_pattern_contrapositive(seed: u64) -> Check {
    let c4m = builtin("c4m").map_err(err)?;
    let base = UnitAssignment::from_pairs(4, &[(1, 2), (2, 1), (1, 3), (3, 1)]);
    let v = evaluate_on_units(&c4m, &base).map_err(err)?;
    let expect = Matrix::diagonal(&[2, 0, 0, 0].map(Scalar::from_int));
    ensure(v == expect, || format!("value {v:?}"))?;
    ensure(!spectrum_pattern_even(&v).map_err(err)?, || "pattern holds".into())?;
    let r = classify_image(
        &c4m,
        4,
        ImageOptions {
            seed,
            ..Default::default()
        },
    )
    .map_err(err)?;
    ensure(r.dim_lower_bound >= 15, || {
        format!("dim lower bound {}", r.dim_lower_bound)
    })?;
    Ok(format!("value diag(2,0,0,0), dim >= {}", r.dim_lower_bound))
}

fn c10_square_central(seed: u64) -> Check {
    let mut rng = task_rng(seed, "acceptance-square-central");
    for sample in 0..1000 {
        let a = Quaternion::random(&mut rng, 10);
        let b = loop {
            let b = Quaternion::random(&mut rng, 10);
            if !b.is_zero() {
                break b;
            }
        };
        let alpha = ratio(rng.gen_range(-50..=50), rng.gen_range(1..=10));
        let m = build_square_central(&a, &b, &alpha).map_err(err)?;
        ensure(m.square() == QuatMatrix2::scalar(&alpha), || {
            format!("sample {sample}: A^2 != alpha I")
        })?;
        let form = verify_square_central_form(&m).map_err(err)?;
        ensure(form.is_form && form.alpha.as_ref() == Some(&alpha), || {
            format!("sample {sample}: form check {form:?}")
        })?;
    }
    Ok("1000 samples square to alpha I and round-trip".into())
}

fn c11_anticommutation(seed: u64) -> Check {
    let comm = builtin("comm").map_err(err)?;
    let cfg = ProbeConfig {
        trials: 100,
        seed,
        ..Default::default()
    };
    let r2 = anticommutation_check(&comm, 2, &cfg).map_err(err)?;
    ensure(r2.holds && r2.trials == 100, || {
        "a pair on M_2 gave a non-scalar anticommutator".into()
    })?;
    let r3 = anticommutation_check(&comm, 3, &cfg).map_err(err)?;
    let w = r3.witness.ok_or("no witness on M_3")?;
    ensure(!w.anticommutator.is_scalar(), || "witness is scalar".into())?;
    Ok(format!("100 scalar pairs on M_2, witness on M_3 at trial {}", w.trial))
}
