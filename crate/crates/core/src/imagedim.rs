//! PI / central / non-central classification and certified lower bounds on
//! the dimension of the Zariski closure of Image p.
//!
//! Verdicts come from exhaustive matrix-unit scans: every value of a
//! multilinear polynomial is a linear combination of its unit values, so "all
//! unit values zero" certifies PI and "all unit values scalar" certifies
//! centrality. Dimension bounds are exact ranks of the differential of the
//! evaluation map at random integer points.

use serde::Serialize;
use thiserror::Error;

use crate::exactmath::{FieldKind, Matrix};
use crate::harmonic::spectrum_pattern_even;
use crate::matunits::{scan_units, ScanOptions, UnitAssignment, UnitsError};
use crate::ncpoly::{EvalError, NcPolynomial};
use crate::rng::{random_point, trial_rng};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ImageError {
    #[error("polynomial is not multilinear")]
    NotMultilinear,
    #[error(transparent)]
    Units(#[from] UnitsError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Classification {
    #[serde(rename = "PI")]
    Pi,
    Central,
    NonCentral,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ImageReport {
    pub classification: Classification,
    pub dim_lower_bound: usize,
    pub diag_nonscalar_witness: Option<UnitAssignment>,
    pub pattern_n4: Option<bool>,
    pub exhaustive: bool,
    pub warnings: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ImageOptions {
    pub trials: usize,
    pub seed: u64,
    /// Random point entries are uniform in [−sample_box, sample_box].
    pub sample_box: i64,
    pub scan: ScanOptions,
}

impl Default for ImageOptions {
    fn default() -> Self {
        ImageOptions {
            trials: 8,
            seed: 0,
            sample_box: 10,
            scan: ScanOptions::default(),
        }
    }
}

/// Rank of the n² × (m·n²) matrix whose column (ℓ, (r, s)) is
/// vec p(a_1, …, e_{rs} at slot ℓ, …, a_m).
pub fn differential_rank(p: &NcPolynomial, point: &[Matrix]) -> Result<usize, ImageError> {
    Ok(evaluation_jacobian(p, point)?.rank())
}

pub fn evaluation_jacobian(p: &NcPolynomial, point: &[Matrix]) -> Result<Matrix, ImageError> {
    if !p.is_multilinear() {
        return Err(ImageError::NotMultilinear);
    }
    let m = p.num_vars();
    let n = point.first().map_or(0, Matrix::rows);
    let field = point.first().map_or(FieldKind::Rational, Matrix::field);
    let mut jac = Matrix::zeros(n * n, m * n * n, field);
    for slot in 1..=m {
        let factors = p.slot_factors(point, slot)?;
        for r in 0..n {
            for s in 0..n {
                let col = (slot - 1) * n * n + r * n + s;
                // L·e_{rs}·R has entry (a, b) = L[a, r]·R[s, b].
                let mut value = Matrix::zeros(n, n, field);
                for (c, left, right) in &factors {
                    let lcol = Matrix::from_fn(n, 1, |a, _| left.get(a, r).clone());
                    let rrow = Matrix::from_fn(1, n, |_, b| right.get(s, b).clone());
                    let outer = (&lcol * &rrow).scale(&c.clone().into());
                    value = &value + &outer;
                }
                for (idx, v) in value.entries().iter().enumerate() {
                    jac.set(idx, col, v.clone());
                }
            }
        }
    }
    Ok(jac)
}

/// Lower bounds on dim Image p that hold for every non-PI non-central
/// multilinear p: n² − n + 2 for n ≥ 4, n² − n + 3 for n ≥ 5.
pub fn theorem_bound(n: usize) -> Option<usize> {
    match n {
        0..=3 => None,
        4 => Some(n * n - n + 2),
        _ => Some(n * n - n + 3),
    }
}

pub fn classify_image(p: &NcPolynomial, n: usize, opts: ImageOptions) -> Result<ImageReport, ImageError> {
    if !p.is_multilinear() {
        return Err(ImageError::NotMultilinear);
    }
    let scan = scan_units(p, n, opts.scan)?;
    let mut warnings = Vec::new();
    if !scan.exhaustive {
        warnings.push(format!(
            "unit scan sampled {} of {} assignments; PI/central verdicts are not certified",
            scan.total,
            crate::matunits::assignment_count(n, p.num_vars())
        ));
    }
    let diag_nonscalar_witness = scan.diag_nonscalar_witness.as_ref().map(|w| w.assignment.clone());
    if scan.all_zero() {
        return Ok(ImageReport {
            classification: Classification::Pi,
            dim_lower_bound: 0,
            diag_nonscalar_witness,
            pattern_n4: None,
            exhaustive: scan.exhaustive,
            warnings,
        });
    }
    if scan.all_scalar() {
        return Ok(ImageReport {
            classification: Classification::Central,
            dim_lower_bound: 1,
            diag_nonscalar_witness,
            pattern_n4: None,
            exhaustive: scan.exhaustive,
            warnings,
        });
    }

    let mut best = 0;
    let mut pattern = true;
    let mut reached_bound = false;
    let target = theorem_bound(n);
    for trial in 0..opts.trials.max(1) {
        let mut rng = trial_rng(opts.seed, "classify-image", trial as u64);
        let point = random_point(&mut rng, p.num_vars(), n, opts.sample_box);
        let rank = differential_rank(p, &point)?;
        best = best.max(rank);
        if target.is_some_and(|t| rank >= t) {
            reached_bound = true;
        }
        if n == 4 {
            let value = p.evaluate(&point)?;
            pattern &= spectrum_pattern_even(&value).expect("4x4 value");
        }
    }
    if let Some(t) = target {
        if !reached_bound {
            warnings.push(format!(
                "below-theorem-bound: best differential rank {best} < {t} after {} trials",
                opts.trials.max(1)
            ));
        }
    }
    if best < 2 {
        warnings.push(format!("non-central polynomial but sampled rank only {best}"));
    }
    Ok(ImageReport {
        classification: Classification::NonCentral,
        dim_lower_bound: best.max(2),
        diag_nonscalar_witness,
        pattern_n4: (n == 4).then_some(pattern),
        exhaustive: scan.exhaustive,
        warnings,
    })
}

/// Rank of the differential of g ↦ g·d·g⁻¹ at `g`: the direction h maps to
/// h·d·g⁻¹ − g·d·g⁻¹·h·g⁻¹.
pub fn conjugation_orbit_rank(d: &Matrix, g: &Matrix) -> Option<usize> {
    let n = d.rows();
    let g_inv = g.inverse()?;
    let conj = &(g * d) * &g_inv;
    let d_ginv = d * &g_inv;
    let mut jac = Matrix::zeros(n * n, n * n, d.field());
    for r in 0..n {
        for s in 0..n {
            let h = Matrix::unit(n, r + 1, s + 1);
            let col = &(&h * &d_ginv) - &(&(&conj * &h) * &g_inv);
            for (idx, v) in col.entries().iter().enumerate() {
                jac.set(idx, r * n + s, v.clone());
            }
        }
    }
    Some(jac.rank())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::Scalar;
    use crate::ncpoly::builtin;
    use crate::rng::{random_int_matrix, random_invertible, task_rng};

    #[test]
    fn differential_rank_examples() {
        let comm = builtin("comm").unwrap();
        let mut rng = task_rng(0, "imagedim-example");
        let point = random_point(&mut rng, 2, 2, 10);
        assert_eq!(differential_rank(&comm, &point).unwrap(), 3);

        let a2 = random_int_matrix(&mut rng, 2, 10);
        let degenerate = vec![Matrix::identity(2, FieldKind::Rational), a2];
        assert_eq!(differential_rank(&comm, &degenerate).unwrap(), 2);

        assert_eq!(differential_rank(&NcPolynomial::zero(2), &point).unwrap(), 0);
    }

    #[test]
    fn jacobian_columns_are_slot_substitutions() {
        let s3 = builtin("s3").unwrap();
        let mut rng = task_rng(3, "jac-cols");
        let point = random_point(&mut rng, 3, 2, 5);
        let jac = evaluation_jacobian(&s3, &point).unwrap();
        for slot in 1..=3 {
            for r in 1..=2 {
                for s in 1..=2 {
                    let mut args = point.clone();
                    args[slot - 1] = Matrix::unit(2, r, s);
                    let v = s3.evaluate(&args).unwrap();
                    let col = (slot - 1) * 4 + (r - 1) * 2 + (s - 1);
                    for idx in 0..4 {
                        assert_eq!(v.entries()[idx], *jac.get(idx, col));
                    }
                }
            }
        }
    }

    #[test]
    fn classify_examples() {
        let r = classify_image(&builtin("comm").unwrap(), 2, ImageOptions::default()).unwrap();
        assert_eq!(r.classification, Classification::NonCentral);
        assert_eq!(r.dim_lower_bound, 3);
        assert!(r.exhaustive);

        let r = classify_image(&builtin("s4").unwrap(), 2, ImageOptions::default()).unwrap();
        assert_eq!(r.classification, Classification::Pi);
        assert_eq!(r.dim_lower_bound, 0);

        let r = classify_image(&builtin("c4m").unwrap(), 2, ImageOptions::default()).unwrap();
        assert_eq!(r.classification, Classification::Central);
        assert_eq!(r.dim_lower_bound, 1);
    }

    #[test]
    fn theorem_bounds() {
        assert_eq!(theorem_bound(3), None);
        assert_eq!(theorem_bound(4), Some(14));
        assert_eq!(theorem_bound(5), Some(23));
        assert_eq!(theorem_bound(6), Some(33));
    }

    #[test]
    fn conjugation_orbits_have_dimension_n2_minus_n() {
        for n in [3usize, 4, 5] {
            let mut rng = task_rng(n as u64, "orbit");
            let d = Matrix::diagonal(&(1..=n as i64).map(|k| Scalar::from_int(k * k - 3)).collect::<Vec<_>>());
            let g = random_invertible(&mut rng, n, 5);
            assert_eq!(conjugation_orbit_rank(&d, &g), Some(n * n - n));
        }
    }

    #[test]
    fn scan_verdicts_agree_with_dense_evaluation() {
        let mut rng = task_rng(17, "centrality-soundness");
        for n in [2usize, 3] {
            for _ in 0..20 {
                let m = rand::Rng::gen_range(&mut rng, 1..=3);
                let p = NcPolynomial::random_multilinear(&mut rng, m, 3);
                let r = classify_image(
                    &p,
                    n,
                    ImageOptions {
                        trials: 2,
                        ..Default::default()
                    },
                )
                .unwrap();
                for _ in 0..100 {
                    let v = p.evaluate(&random_point(&mut rng, m, n, 10)).unwrap();
                    match r.classification {
                        Classification::Pi => assert!(v.is_zero()),
                        Classification::Central => assert!(v.is_scalar()),
                        Classification::NonCentral => {}
                    }
                }
            }
        }
    }

    #[test]
    fn n4_anomaly_examples() {
        let c4m = builtin("c4m").unwrap();
        let base = UnitAssignment::from_pairs(4, &[(1, 2), (2, 1), (1, 3), (3, 1)]);
        let v = crate::matunits::evaluate_on_units(&c4m, &base).unwrap();
        let expect = Matrix::diagonal(&[2, 0, 0, 0].map(Scalar::from_int));
        assert_eq!(v, expect);
        assert!(!spectrum_pattern_even(&v).unwrap());
    }
}
