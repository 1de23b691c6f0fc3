//! Power-centrality probes.
//!
//! pᵛ is not multilinear, so unit scans say nothing about it; probes evaluate
//! at random integer points and attach a Schwartz–Zippel failure bound to
//! every positive answer.

use num_integer::gcd;
use num_traits::One;
use serde::Serialize;
use thiserror::Error;

use crate::chiconstruct::{f_differential_rank, ChiError};
use crate::exactmath::{int, serialize_rational, Matrix, Rational};
use crate::matunits::{scan_units, ScanOptions, UnitAssignment, UnitsError};
use crate::ncpoly::{EvalError, NcPolynomial};
use crate::rng::{random_int_matrix, random_point, trial_rng};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PowerError {
    #[error("polynomial is not multilinear")]
    NotMultilinear,
    #[error("polynomial is an identity of M_{0}")]
    IdentityPolynomial(usize),
    #[error("nu must be at least 1")]
    ZeroExponent,
    #[error("probe found p^{nu} central on M_{n}; no multilinear power-central polynomial exists for n >= 4")]
    TheoremContradiction { n: usize, nu: usize },
    #[error(transparent)]
    Units(#[from] UnitsError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Chi(#[from] ChiError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SkipReason {
    /// gcd(ν, n) = 1.
    #[serde(rename = "gcd_filter")]
    Gcd,
    /// Multilinear p can only be ν-central with ν = n.
    #[serde(rename = "thmC_filter")]
    ThmC,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict")]
pub enum ProbeVerdict {
    ProbablyCentral {
        trials: usize,
        #[serde(serialize_with = "serialize_rational")]
        failure_bound: Rational,
    },
    /// Every sampled pᵛ value was zero.
    ProbablyZero {
        trials: usize,
        #[serde(serialize_with = "serialize_rational")]
        failure_bound: Rational,
    },
    NotCentral {
        trial: usize,
        witness: Vec<Matrix>,
        value: Matrix,
    },
}

impl ProbeVerdict {
    pub fn is_probably_central(&self) -> bool {
        matches!(self, ProbeVerdict::ProbablyCentral { .. })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProbeConfig {
    pub trials: usize,
    pub seed: u64,
    pub sample_box: i64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig {
            trials: 20,
            seed: 0,
            sample_box: 10,
        }
    }
}

/// (d / (2B + 1))^trials with d = ν·deg p + 1, capped at 1.
pub fn failure_bound(p: &NcPolynomial, nu: usize, cfg: &ProbeConfig) -> Rational {
    let per_trial = int((nu * p.degree() + 1) as i64) / int(2 * cfg.sample_box + 1);
    if per_trial >= Rational::one() {
        return Rational::one();
    }
    num_traits::pow(per_trial, cfg.trials)
}

pub fn power_central_probe(
    p: &NcPolynomial,
    n: usize,
    nu: usize,
    cfg: &ProbeConfig,
) -> Result<ProbeVerdict, PowerError> {
    if nu == 0 {
        return Err(PowerError::ZeroExponent);
    }
    let label = format!("power-central:nu={nu}");
    let trials = cfg.trials.max(1);
    let mut all_zero = true;
    for trial in 0..trials {
        let mut rng = trial_rng(cfg.seed, &label, trial as u64);
        let point = random_point(&mut rng, p.num_vars(), n, cfg.sample_box);
        let value = p.evaluate(&point)?.pow(nu as u32);
        if !value.is_scalar() {
            return Ok(ProbeVerdict::NotCentral {
                trial,
                witness: point,
                value,
            });
        }
        all_zero &= value.is_zero();
    }
    let failure_bound = failure_bound(p, nu, &ProbeConfig { trials, ..*cfg });
    Ok(if all_zero {
        ProbeVerdict::ProbablyZero { trials, failure_bound }
    } else {
        ProbeVerdict::ProbablyCentral { trials, failure_bound }
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum NuStatus {
    Skipped { reason: SkipReason },
    Probed { result: ProbeVerdict },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NuOutcome {
    pub nu: usize,
    #[serde(flatten)]
    pub status: NuStatus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderSearchReport {
    pub order: Option<usize>,
    pub steps: Vec<NuOutcome>,
    pub notes: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrderSearchOptions {
    pub nu_max: usize,
    pub probe: ProbeConfig,
    pub filters: bool,
    pub scan: ScanOptions,
}

impl Default for OrderSearchOptions {
    fn default() -> Self {
        OrderSearchOptions {
            nu_max: 8,
            probe: ProbeConfig::default(),
            filters: true,
            scan: ScanOptions::default(),
        }
    }
}

/// Smallest ν ≤ ν_max with pᵛ probably central. ν = 1 is decided exactly by
/// a unit scan; larger ν are probed unless a filter rules them out.
pub fn order_search(p: &NcPolynomial, n: usize, opts: &OrderSearchOptions) -> Result<OrderSearchReport, PowerError> {
    if !p.is_multilinear() {
        return Err(PowerError::NotMultilinear);
    }
    let scan = scan_units(p, n, opts.scan)?;
    if scan.all_zero() {
        return Err(PowerError::IdentityPolynomial(n));
    }
    let mut notes = Vec::new();
    if !scan.exhaustive {
        notes.push("unit scan was sampled; nu = 1 verdict is not certified".to_string());
    }
    if n == 3 {
        notes.push("n = 3 is probed empirically; no theoretical conclusion is drawn".to_string());
    }
    if scan.all_scalar() {
        return Ok(OrderSearchReport {
            order: Some(1),
            steps: Vec::new(),
            notes,
        });
    }
    let mut steps = Vec::new();
    for nu in 2..=opts.nu_max {
        if opts.filters {
            let reason = if gcd(nu, n) == 1 {
                Some(SkipReason::Gcd)
            } else if nu != n {
                Some(SkipReason::ThmC)
            } else {
                None
            };
            if let Some(reason) = reason {
                steps.push(NuOutcome {
                    nu,
                    status: NuStatus::Skipped { reason },
                });
                continue;
            }
        }
        let result = power_central_probe(p, n, nu, &opts.probe)?;
        let central = result.is_probably_central();
        steps.push(NuOutcome {
            nu,
            status: NuStatus::Probed { result },
        });
        if central {
            if n >= 4 {
                return Err(PowerError::TheoremContradiction { n, nu });
            }
            return Ok(OrderSearchReport {
                order: Some(nu),
                steps,
                notes,
            });
        }
    }
    Ok(OrderSearchReport {
        order: None,
        steps,
        notes,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnticommWitness {
    pub trial: usize,
    pub point: Vec<Matrix>,
    pub alternate: Matrix,
    pub w: Matrix,
    pub w_prime: Matrix,
    pub anticommutator: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnticommReport {
    pub holds: bool,
    pub trials: usize,
    pub witness: Option<AnticommWitness>,
}

/// ww' + w'w where w = p(point) and w' is p with slot 1 replaced by `alternate`.
pub fn anticommutator(
    p: &NcPolynomial,
    point: &[Matrix],
    alternate: &Matrix,
) -> Result<(Matrix, Matrix, Matrix), PowerError> {
    let w = p.evaluate(point)?;
    let mut other = point.to_vec();
    other[0] = alternate.clone();
    let w2 = p.evaluate(&other)?;
    let sum = &(&w * &w2) + &(&w2 * &w);
    Ok((w, w2, sum))
}

pub fn anticommutation_check(p: &NcPolynomial, n: usize, cfg: &ProbeConfig) -> Result<AnticommReport, PowerError> {
    if !p.is_multilinear() {
        return Err(PowerError::NotMultilinear);
    }
    let trials = cfg.trials.max(1);
    for trial in 0..trials {
        let mut rng = trial_rng(cfg.seed, "anticommutation", trial as u64);
        let point = random_point(&mut rng, p.num_vars(), n, cfg.sample_box);
        let alternate = random_int_matrix(&mut rng, n, cfg.sample_box);
        let (w, w_prime, sum) = anticommutator(p, &point, &alternate)?;
        if !sum.is_scalar() {
            return Ok(AnticommReport {
                holds: false,
                trials: trial + 1,
                witness: Some(AnticommWitness {
                    trial,
                    point,
                    alternate,
                    w,
                    w_prime,
                    anticommutator: sum,
                }),
            });
        }
    }
    Ok(AnticommReport {
        holds: true,
        trials,
        witness: None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NoncommWitness {
    pub slot: usize,
    pub point: Vec<Matrix>,
    pub alternate: Matrix,
    pub commutator: Matrix,
}

/// Random search for a slot i and alternate a_i' with
/// [p(…a_i…), p(…a_i'…)] ≠ 0; `budget` counts random base points.
pub fn find_noncommuting_slot(
    p: &NcPolynomial,
    n: usize,
    budget: usize,
    seed: u64,
    sample_box: i64,
) -> Result<Option<NoncommWitness>, PowerError> {
    for attempt in 0..budget {
        let mut rng = trial_rng(seed, "noncommuting-slot", attempt as u64);
        let point = random_point(&mut rng, p.num_vars(), n, sample_box);
        let w = p.evaluate(&point)?;
        for slot in 1..=p.num_vars() {
            let alternate = random_int_matrix(&mut rng, n, sample_box);
            let mut other = point.clone();
            other[slot - 1] = alternate.clone();
            let w2 = p.evaluate(&other)?;
            let commutator = w.commutator(&w2);
            if !commutator.is_zero() {
                return Ok(Some(NoncommWitness {
                    slot,
                    point,
                    alternate,
                    commutator,
                }));
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TauReport {
    pub original: UnitAssignment,
    pub swapped: UnitAssignment,
    pub delta_original: usize,
    pub delta_swapped: usize,
    pub consistent: bool,
}

/// Compares δ at a diagonal non-scalar unit value and at its conjugate by the
/// transposition (1 2). `None` when the scan finds no such value.
pub fn tau_check(
    p: &NcPolynomial,
    n: usize,
    trials: usize,
    seed: u64,
    scan: ScanOptions,
) -> Result<Option<TauReport>, PowerError> {
    let report = scan_units(p, n, scan)?;
    let Some(witness) = report.diag_nonscalar_witness else {
        return Ok(None);
    };
    let mut perm: Vec<usize> = (0..n).collect();
    perm.swap(0, 1);
    let original = witness.assignment;
    let swapped = original.permuted(&perm);
    let delta_original = f_differential_rank(p, &original, trials, seed)?;
    let delta_swapped = f_differential_rank(p, &swapped, trials, seed)?;
    Ok(Some(TauReport {
        consistent: delta_original.max(delta_swapped) >= 2,
        original,
        swapped,
        delta_original,
        delta_swapped,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::ratio;
    use crate::ncpoly::{builtin, parse};
    use crate::rng::task_rng;

    fn comm() -> NcPolynomial {
        builtin("comm").unwrap()
    }

    #[test]
    fn probe_examples() {
        let cfg = ProbeConfig::default();
        match power_central_probe(&comm(), 2, 2, &cfg).unwrap() {
            ProbeVerdict::ProbablyCentral { trials, failure_bound } => {
                assert_eq!(trials, 20);
                assert_eq!(failure_bound, num_traits::pow(ratio(5, 21), 20));
            }
            v => panic!("{v:?}"),
        }
        for nu in [2, 3] {
            match power_central_probe(&comm(), 3, nu, &cfg).unwrap() {
                ProbeVerdict::NotCentral { witness, value, .. } => {
                    assert_eq!(comm().evaluate(&witness).unwrap().pow(nu as u32), value);
                    assert!(!value.is_scalar());
                }
                v => panic!("{v:?}"),
            }
        }
    }

    #[test]
    fn failure_bound_caps_at_one() {
        let cfg = ProbeConfig {
            sample_box: 1,
            ..Default::default()
        };
        assert_eq!(failure_bound(&comm(), 4, &cfg), Rational::one());
    }

    #[test]
    fn order_search_examples() {
        let opts = OrderSearchOptions::default();
        let r = order_search(&comm(), 2, &opts).unwrap();
        assert_eq!(r.order, Some(2));

        let r = order_search(&builtin("c4m").unwrap(), 2, &opts).unwrap();
        assert_eq!(r.order, Some(1));

        let r = order_search(&comm(), 4, &opts).unwrap();
        assert_eq!(r.order, None);
        for step in &r.steps {
            let expected_skip = match step.nu {
                3 | 5 | 7 => Some(SkipReason::Gcd),
                2 | 6 | 8 => Some(SkipReason::ThmC),
                _ => None,
            };
            match (&step.status, expected_skip) {
                (NuStatus::Skipped { reason }, Some(e)) => assert_eq!(*reason, e),
                (NuStatus::Probed { result }, None) => {
                    assert_eq!(step.nu, 4);
                    assert!(matches!(result, ProbeVerdict::NotCentral { .. }));
                }
                other => panic!("nu={} {other:?}", step.nu),
            }
        }
    }

    #[test]
    fn pi_input_is_rejected() {
        let err = order_search(&builtin("s4").unwrap(), 2, &OrderSearchOptions::default()).unwrap_err();
        assert_eq!(err, PowerError::IdentityPolynomial(2));
    }

    #[test]
    fn returned_order_is_minimal() {
        let opts = OrderSearchOptions {
            filters: false,
            ..Default::default()
        };
        let r = order_search(&comm(), 2, &opts).unwrap();
        let nu = r.order.unwrap();
        assert_eq!(nu, 2);
        // ν = 1 was excluded exactly by the scan; every probed proper divisor failed.
        for step in &r.steps {
            if step.nu < nu && nu.is_multiple_of(step.nu) {
                assert!(matches!(
                    step.status,
                    NuStatus::Probed {
                        result: ProbeVerdict::NotCentral { .. }
                    }
                ));
            }
        }
    }

    #[test]
    fn filters_never_hide_an_order() {
        for n in [2usize, 3, 4] {
            let filtered = OrderSearchOptions {
                nu_max: 2 * n,
                ..Default::default()
            };
            let unfiltered = OrderSearchOptions {
                filters: false,
                ..filtered
            };
            let a = order_search(&comm(), n, &filtered).unwrap().order;
            let b = order_search(&comm(), n, &unfiltered).unwrap().order;
            if let Some(nu) = b {
                assert_eq!(a, Some(nu), "n={n}");
            }
        }
    }

    #[test]
    fn anticommutation_on_units() {
        let e = |i, j| Matrix::unit(2, i, j);
        let (w, w2, sum) = anticommutator(&comm(), &[e(1, 1), e(1, 2)], &e(2, 1)).unwrap();
        assert_eq!(w, e(1, 2));
        assert_eq!(w2, &e(2, 2) - &e(1, 1));
        assert!(sum.is_zero());
    }

    #[test]
    fn anticommutation_examples() {
        let cfg = ProbeConfig {
            trials: 100,
            ..Default::default()
        };
        let r = anticommutation_check(&comm(), 2, &cfg).unwrap();
        assert!(r.holds && r.trials == 100);
        let r = anticommutation_check(&comm(), 3, &cfg).unwrap();
        assert!(!r.holds);
        assert!(!r.witness.unwrap().anticommutator.is_scalar());
    }

    #[test]
    fn noncommuting_slot_examples() {
        let x1 = parse("x1", 1).unwrap();
        let e11 = Matrix::unit(2, 1, 1);
        let e12 = Matrix::unit(2, 1, 2);
        assert_eq!(e11.commutator(&e12), e12);
        let w = find_noncommuting_slot(&x1, 2, 16, 0, 10).unwrap().unwrap();
        assert_eq!(w.slot, 1);

        let w = find_noncommuting_slot(&comm(), 2, 16, 0, 10).unwrap().unwrap();
        assert!(!w.commutator.is_zero());

        assert!(find_noncommuting_slot(&builtin("c4m").unwrap(), 2, 16, 0, 10)
            .unwrap()
            .is_none());
    }

    #[test]
    fn tau_argument_never_gives_two_rank_one_constructions() {
        let r = tau_check(&builtin("c4m").unwrap(), 4, 4, 0, ScanOptions::default())
            .unwrap()
            .unwrap();
        assert!(r.consistent, "{r:?}");
        let mut rng = task_rng(5, "tau-random");
        let mut checked = 0;
        while checked < 5 {
            let p = NcPolynomial::random_multilinear(&mut rng, 3, 3);
            if let Some(r) = tau_check(&p, 4, 4, 0, ScanOptions::default()).unwrap() {
                assert!(r.consistent, "{p}: {r:?}");
                checked += 1;
            }
        }
    }
}
