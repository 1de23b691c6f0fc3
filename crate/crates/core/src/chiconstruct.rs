//! The cyclic index shift χ on matrix units and the map
//!
//! f(t) = p( Σ_k t_{k,1} χ^k(a_1), …, Σ_k t_{k,m} χ^k(a_m) ),  k = 0..n−1,
//!
//! built from a base unit assignment (a_1, …, a_m).

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::exactmath::{FieldKind, Matrix, MatrixError, Scalar};
use crate::matunits::{classify_value, evaluate_on_units, MatrixUnit, UnitAssignment, UnitValueClass, UnitsError};
use crate::ncpoly::{EvalError, NcPolynomial};
use crate::rng::trial_rng;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChiError {
    #[error("t has shape {got:?}, expected (n, m) = {expected:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        got: (usize, usize),
    },
    #[error("base assignment has value {0:?}; a diagonal (or zero) value is required")]
    BaseNotDiagonal(UnitValueClass),
    #[error(transparent)]
    Units(#[from] UnitsError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// χ^k: both indices move by k modulo n, residues kept in 1..=n.
pub fn chi_shift(u: MatrixUnit, k: i64, n: usize) -> MatrixUnit {
    let shift = |i: usize| ((i as i64 - 1 + k).rem_euclid(n as i64) + 1) as usize;
    MatrixUnit::new(shift(u.row), shift(u.col))
}

/// Coefficients t_{k,ℓ}: `values[k][ℓ − 1]` for shift k in 0..n and slot ℓ in 1..=m.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TParameters {
    values: Vec<Vec<Scalar>>,
}

impl TParameters {
    pub fn from_fn(n: usize, m: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        TParameters {
            values: (0..n).map(|k| (1..=m).map(|l| f(k, l)).collect()).collect(),
        }
    }

    pub fn zeros(n: usize, m: usize) -> Self {
        Self::from_fn(n, m, |_, _| Scalar::zero())
    }

    /// Integer entries uniform in [−bound, bound].
    pub fn random<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize, bound: i64) -> Self {
        Self::from_fn(n, m, |_, _| Scalar::from_int(rng.gen_range(-bound..=bound)))
    }

    pub fn get(&self, k: usize, slot: usize) -> &Scalar {
        &self.values[k][slot - 1]
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.values.len(), self.values.first().map_or(0, Vec::len))
    }
}

fn check_shape(base: &UnitAssignment, t: &TParameters) -> Result<(), ChiError> {
    let expected = (base.n, base.units.len());
    if t.shape() != expected {
        return Err(ChiError::ShapeMismatch {
            expected,
            got: t.shape(),
        });
    }
    Ok(())
}

/// Slot matrices Σ_k t_{k,ℓ} χ^k(a_ℓ).
pub fn orbit_combinations(base: &UnitAssignment, t: &TParameters) -> Result<Vec<Matrix>, ChiError> {
    check_shape(base, t)?;
    let n = base.n;
    let field = t
        .values
        .iter()
        .flatten()
        .map(Scalar::field_kind)
        .find(|k| *k != FieldKind::Rational)
        .unwrap_or(FieldKind::Rational);
    Ok(base
        .units
        .iter()
        .enumerate()
        .map(|(idx, &a)| {
            let mut x = Matrix::zeros(n, n, field);
            for k in 0..n {
                let u = chi_shift(a, k as i64, n);
                let cur = x.get(u.row - 1, u.col - 1).clone();
                x.set(u.row - 1, u.col - 1, &cur + t.get(k, idx + 1));
            }
            x
        })
        .collect())
}

pub fn build_f(p: &NcPolynomial, base: &UnitAssignment, t: &TParameters) -> Result<Matrix, ChiError> {
    let args = orbit_combinations(base, t)?;
    Ok(p.evaluate(&args)?)
}

/// Jacobian of t ↦ f(t) at `t`: n² rows (row-major vec of f), n·m columns
/// ordered (slot ℓ, shift k). Column (ℓ, k) is p with slot ℓ replaced by
/// χ^k(a_ℓ) and the other slots at their t-combinations.
pub fn f_jacobian(p: &NcPolynomial, base: &UnitAssignment, t: &TParameters) -> Result<Matrix, ChiError> {
    let args = orbit_combinations(base, t)?;
    let n = base.n;
    let m = base.units.len();
    let field = args.first().map_or(FieldKind::Rational, Matrix::field);
    let mut jac = Matrix::zeros(n * n, n * m, field);
    for slot in 1..=m {
        let factors = p.slot_factors(&args, slot)?;
        for k in 0..n {
            let u = chi_shift(base.units[slot - 1], k as i64, n);
            let col = (slot - 1) * n + k;
            // Σ c · L e_{ij} R has entry (a, b) = Σ c · L[a, i] · R[j, b].
            for (c, left, right) in &factors {
                let c = Scalar::Rational(c.clone());
                for a in 0..n {
                    let la = left.get(a, u.row - 1);
                    if la.is_zero() {
                        continue;
                    }
                    let cla = &c * la;
                    for b in 0..n {
                        let rb = right.get(u.col - 1, b);
                        if rb.is_zero() {
                            continue;
                        }
                        let row = a * n + b;
                        let cur = jac.get(row, col).clone();
                        jac.set(row, col, &cur + &(&cla * rb));
                    }
                }
            }
        }
    }
    Ok(jac)
}

/// δ: the largest Jacobian rank of t ↦ f(t) over `trials` random integer
/// points t ∈ [−10, 10]^{n·m}; a lower bound on dim of the closure of Image f.
pub fn f_differential_rank(
    p: &NcPolynomial,
    base: &UnitAssignment,
    trials: usize,
    seed: u64,
) -> Result<usize, ChiError> {
    match classify_value(&evaluate_on_units(p, base)?)? {
        UnitValueClass::Zero | UnitValueClass::Diagonal { .. } => {}
        other => return Err(ChiError::BaseNotDiagonal(other)),
    }
    let (n, m) = (base.n, base.units.len());
    let mut best = 0;
    for trial in 0..trials.max(1) {
        let mut rng = trial_rng(seed, "chi-f-rank", trial as u64);
        let t = TParameters::random(&mut rng, n, m, 10);
        best = best.max(f_jacobian(p, base, &t)?.rank());
        if best == n {
            break;
        }
    }
    Ok(best)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CyclicSpectrum {
    /// Characteristic polynomial is λⁿ − α.
    pub holds: bool,
    pub alpha: Option<Scalar>,
    /// Ascending coefficients of the characteristic polynomial.
    pub char_poly: Vec<Scalar>,
}

/// When `holds` and α ≠ 0 the eigenvalues are c, cε, …, cε^{n−1} with cⁿ = α.
pub fn verify_cyclic_spectrum(a: &Matrix) -> Result<CyclicSpectrum, MatrixError> {
    let cp = a.char_poly()?;
    let n = a.rows();
    let holds = cp[1..n].iter().all(Scalar::is_zero);
    Ok(CyclicSpectrum {
        holds,
        alpha: holds.then(|| -&cp[0]),
        char_poly: cp,
    })
}

/// Entries (i, i+1) and the corner (n, 1).
pub fn cyclic_positions(n: usize) -> Vec<(usize, usize)> {
    (0..n).map(|i| (i, (i + 1) % n)).collect()
}

/// Every entry off the superdiagonal-plus-corner pattern is zero.
pub fn has_cyclic_support(a: &Matrix) -> bool {
    let n = a.rows();
    (0..n).all(|i| (0..n).all(|j| j == (i + 1) % n || a.get(i, j).is_zero()))
}

pub fn starred_entries_nonzero(a: &Matrix) -> bool {
    cyclic_positions(a.rows())
        .into_iter()
        .all(|(i, j)| !a.get(i, j).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matunits::{iota, iota_sum, scan_units, ScanOptions};
    use crate::ncpoly::{builtin, parse};
    use crate::rng::task_rng;

    #[test]
    fn chi_examples() {
        assert_eq!(chi_shift(MatrixUnit::new(1, 2), 1, 3), MatrixUnit::new(2, 3));
        assert_eq!(chi_shift(MatrixUnit::new(5, 7), 1, 8), MatrixUnit::new(6, 8));
        assert_eq!(chi_shift(MatrixUnit::new(3, 1), 1, 3), MatrixUnit::new(1, 2));
        assert_eq!(chi_shift(MatrixUnit::new(1, 2), -1, 3), MatrixUnit::new(3, 1));
    }

    #[test]
    fn chi_has_order_n_and_preserves_iota() {
        for n in 1..=8usize {
            for i in 1..=n {
                for j in 1..=n {
                    let u = MatrixUnit::new(i, j);
                    assert_eq!(chi_shift(u, n as i64, n), u);
                    for k in 0..n as i64 {
                        let v = chi_shift(u, k, n);
                        assert_eq!(iota(v).rem_euclid(n as i64), iota(u).rem_euclid(n as i64));
                    }
                }
            }
        }
    }

    #[test]
    fn comm_on_m2_matches_hand_expansion() {
        let comm = builtin("comm").unwrap();
        let base = UnitAssignment::from_pairs(2, &[(1, 2), (2, 1)]);
        let mut rng = task_rng(5, "chi-hand");
        for _ in 0..20 {
            let t = TParameters::random(&mut rng, 2, 2, 10);
            let coeff = &(t.get(0, 1) * t.get(0, 2)) - &(t.get(1, 1) * t.get(1, 2));
            let expect = Matrix::diagonal(&[coeff.clone(), -&coeff]);
            assert_eq!(build_f(&comm, &base, &t).unwrap(), expect);
        }
        assert!(build_f(&comm, &base, &TParameters::zeros(2, 2)).unwrap().is_zero());
    }

    fn bases_with_value_e12(n: usize) -> Vec<(NcPolynomial, UnitAssignment)> {
        let mut out = vec![(
            builtin("comm").unwrap(),
            UnitAssignment::from_pairs(n, &[(1, 1), (1, 2)]),
        )];
        for name in ["s3", "c4m"] {
            let p = builtin(name).unwrap();
            let r = scan_units(
                &p,
                n,
                ScanOptions {
                    budget: 1 << 20,
                    allow_sampling: true,
                },
            )
            .unwrap();
            if let Some(w) = r.unit_multiple_witness(1, 2) {
                out.push((p, w.assignment.clone()));
            }
        }
        out
    }

    #[test]
    fn iota_one_bases_land_on_cyclic_support() {
        for n in [3usize, 4, 5] {
            let bases = bases_with_value_e12(n);
            assert!(bases.len() >= 2, "n = {n}");
            for (p, base) in bases {
                assert_eq!(iota_sum(&base).rem_euclid(n as i64), 1);
                let mut rng = task_rng(n as u64, "chi-support");
                for _ in 0..50 {
                    let t = TParameters::random(&mut rng, n, p.num_vars(), 10);
                    let f = build_f(&p, &base, &t).unwrap();
                    assert!(has_cyclic_support(&f), "{p} at {base:?}: {f:?}");
                    if starred_entries_nonzero(&f) {
                        let spec = verify_cyclic_spectrum(&f).unwrap();
                        assert!(spec.holds);
                        let prod = cyclic_positions(n)
                            .into_iter()
                            .fold(Scalar::one(), |acc, (i, j)| &acc * f.get(i, j));
                        assert_eq!(spec.alpha.unwrap(), prod);
                    }
                }
            }
        }
    }

    #[test]
    fn diagonal_base_gives_diagonal_f() {
        let cases = [
            ("comm", UnitAssignment::from_pairs(3, &[(1, 2), (2, 1)])),
            ("c4m", UnitAssignment::from_pairs(4, &[(1, 2), (2, 1), (1, 3), (3, 1)])),
            ("s3", UnitAssignment::from_pairs(3, &[(1, 2), (2, 3), (3, 1)])),
        ];
        for (name, base) in cases {
            let p = builtin(name).unwrap();
            assert!(matches!(
                classify_value(&evaluate_on_units(&p, &base).unwrap()).unwrap(),
                UnitValueClass::Diagonal { .. }
            ));
            let mut rng = task_rng(2, name);
            for _ in 0..50 {
                let t = TParameters::random(&mut rng, base.n, p.num_vars(), 10);
                assert!(build_f(&p, &base, &t).unwrap().is_diagonal());
            }
        }
    }

    // Oracle: 3×3 determinant by cofactor expansion.
    fn det3(a: &Matrix) -> Scalar {
        let g = |i, j| a.get(i, j).clone();
        let minor = |r0, r1, c0, c1| &g(r0, c0) * &g(r1, c1) - &g(r0, c1) * &g(r1, c0);
        &(&g(0, 0) * &minor(1, 2, 1, 2) - &g(0, 1) * &minor(1, 2, 0, 2)) + &(&g(0, 2) * &minor(1, 2, 0, 1))
    }

    #[test]
    fn weighted_three_cycle_spectrum() {
        let mut rng = task_rng(9, "three-cycle");
        for _ in 0..10 {
            let ts: Vec<i64> = (0..3)
                .map(|_| rng.gen_range(1..=9) * if rng.gen() { 1 } else { -1 })
                .collect();
            let a = Matrix::from_ints(&[&[0, ts[0], 0], &[0, 0, ts[1]], &[ts[2], 0, 0]]);
            let spec = verify_cyclic_spectrum(&a).unwrap();
            assert!(spec.holds);
            assert_eq!(spec.alpha.clone().unwrap(), Scalar::from_int(ts[0] * ts[1] * ts[2]));
            // det(A) = α for a 3-cycle: char poly λ³ − α evaluated at 0 is −α = −det A.
            assert_eq!(det3(&a), spec.alpha.unwrap());
        }
        let id = Matrix::identity(3, FieldKind::Rational);
        assert!(!verify_cyclic_spectrum(&id).unwrap().holds);
        let z = verify_cyclic_spectrum(&Matrix::zeros(3, 3, FieldKind::Rational)).unwrap();
        assert!(z.holds && z.alpha.unwrap().is_zero());
        assert!(verify_cyclic_spectrum(&Matrix::zeros(2, 3, FieldKind::Rational)).is_err());
    }

    #[test]
    fn differential_rank_examples() {
        let comm = builtin("comm").unwrap();
        let base = UnitAssignment::from_pairs(2, &[(1, 2), (2, 1)]);
        assert_eq!(f_differential_rank(&comm, &base, 4, 0).unwrap(), 1);

        let zero = NcPolynomial::zero(2);
        assert_eq!(f_differential_rank(&zero, &base, 4, 0).unwrap(), 0);

        let c4m = builtin("c4m").unwrap();
        let base4 = UnitAssignment::from_pairs(4, &[(1, 2), (2, 1), (1, 3), (3, 1)]);
        assert!(f_differential_rank(&c4m, &base4, 4, 0).unwrap() >= 2);

        let off = UnitAssignment::from_pairs(2, &[(1, 1), (1, 2)]);
        assert!(matches!(
            f_differential_rank(&comm, &off, 1, 0),
            Err(ChiError::BaseNotDiagonal(_))
        ));
    }

    #[test]
    fn jacobian_matches_finite_difference() {
        // f is multilinear in the slot vectors, so f(t + h·e_{k,ℓ}) − f(t) = h·∂f/∂t_{k,ℓ} exactly.
        let p = parse("x1*x2*x3 - 2*x3*x1*x2 + x2*x1*x3", 3).unwrap();
        let base = UnitAssignment::from_pairs(3, &[(1, 2), (2, 3), (3, 1)]);
        let mut rng = task_rng(1, "fd");
        let t = TParameters::random(&mut rng, 3, 3, 5);
        let jac = f_jacobian(&p, &base, &t).unwrap();
        let f0 = build_f(&p, &base, &t).unwrap();
        for slot in 1..=3 {
            for k in 0..3 {
                let bumped = TParameters::from_fn(3, 3, |kk, ll| {
                    let v = t.get(kk, ll).clone();
                    if kk == k && ll == slot {
                        &v + &Scalar::one()
                    } else {
                        v
                    }
                });
                let diff = &build_f(&p, &base, &bumped).unwrap() - &f0;
                let col = (slot - 1) * 3 + k;
                for r in 0..9 {
                    assert_eq!(diff.entries()[r], *jac.get(r, col));
                }
            }
        }
    }
}
