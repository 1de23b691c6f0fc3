//! Multilinear polynomials evaluated on matrix units.
//!
//! A product of units e_{a b}·e_{c d} is δ_{bc}·e_{a d}, so each word of a
//! multilinear polynomial contributes at most one entry. The value of the
//! whole polynomial is then zero, diagonal, or a multiple of a single
//! off-diagonal unit; [`classify_value`] enforces that trichotomy.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::exactmath::{FieldKind, Matrix, Scalar};
use crate::ncpoly::NcPolynomial;

/// e_{row,col}, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MatrixUnit {
    pub row: usize,
    pub col: usize,
}

impl MatrixUnit {
    pub fn new(row: usize, col: usize) -> Self {
        MatrixUnit { row, col }
    }

    pub fn to_matrix(self, n: usize) -> Matrix {
        Matrix::unit(n, self.row, self.col)
    }
}

impl Serialize for MatrixUnit {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.row, self.col].serialize(s)
    }
}

/// One matrix unit per variable, all in M_n.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct UnitAssignment {
    pub n: usize,
    pub units: Vec<MatrixUnit>,
}

impl UnitAssignment {
    pub fn new(n: usize, units: Vec<MatrixUnit>) -> Self {
        assert!(
            units
                .iter()
                .all(|u| (1..=n).contains(&u.row) && (1..=n).contains(&u.col)),
            "matrix unit index outside 1..={n}"
        );
        UnitAssignment { n, units }
    }

    /// Convenience: `UnitAssignment::from_pairs(3, &[(1, 2), (2, 3)])`.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Self {
        Self::new(n, pairs.iter().map(|&(i, j)| MatrixUnit::new(i, j)).collect())
    }

    /// The `index`-th assignment in lexicographic order of (i₁, j₁, …, i_m, j_m).
    pub fn from_index(n: usize, m: usize, mut index: u64) -> Self {
        let base = n as u64;
        let mut digits = vec![0usize; 2 * m];
        for d in digits.iter_mut().rev() {
            *d = (index % base) as usize + 1;
            index /= base;
        }
        let units = digits.chunks(2).map(|c| MatrixUnit::new(c[0], c[1])).collect();
        UnitAssignment { n, units }
    }

    pub fn matrices(&self) -> Vec<Matrix> {
        self.units.iter().map(|u| u.to_matrix(self.n)).collect()
    }

    /// Conjugates every unit by the permutation matrix of `perm` (0-based images).
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let units = self
            .units
            .iter()
            .map(|u| MatrixUnit::new(perm[u.row - 1] + 1, perm[u.col - 1] + 1))
            .collect();
        UnitAssignment { n: self.n, units }
    }
}

/// Displacement ι(e_{ij}) = j − i.
pub fn iota(u: MatrixUnit) -> i64 {
    u.col as i64 - u.row as i64
}

pub fn iota_sum(a: &UnitAssignment) -> i64 {
    a.units.iter().copied().map(iota).sum()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum UnitValueClass {
    Zero,
    Diagonal { entries: Vec<Scalar> },
    UnitMultiple { alpha: Scalar, row: usize, col: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UnitsError {
    /// A matrix-unit value that is neither zero, diagonal, nor a single
    /// off-diagonal entry. Multilinear evaluations never produce one, so
    /// this means a bug upstream.
    #[error("value is not zero, diagonal or a single off-diagonal unit: {0:?}")]
    LemmaGraphViolation(Vec<Vec<String>>),
    #[error("polynomial is not multilinear")]
    NotMultilinear,
    #[error("assignment has {got} units for {expected} variables")]
    ArityMismatch { expected: usize, got: usize },
    #[error("{total} assignments exceed the scan budget of {budget}; enable sampling")]
    BudgetExceeded { total: u128, budget: u64 },
}

fn check(p: &NcPolynomial, u: &UnitAssignment) -> Result<(), UnitsError> {
    if !p.is_multilinear() {
        return Err(UnitsError::NotMultilinear);
    }
    if u.units.len() != p.num_vars() {
        return Err(UnitsError::ArityMismatch {
            expected: p.num_vars(),
            got: u.units.len(),
        });
    }
    Ok(())
}

/// Sparse value: map (row, col) → coefficient, zeros dropped.
fn unit_value_sparse(p: &NcPolynomial, u: &UnitAssignment) -> BTreeMap<(usize, usize), Scalar> {
    let mut acc: BTreeMap<(usize, usize), Scalar> = BTreeMap::new();
    for (w, c) in p.terms() {
        let letters = w.letters();
        let first = u.units[letters[0] - 1];
        let mut end = first.col;
        let chained = letters[1..].iter().all(|&l| {
            let next = u.units[l - 1];
            let ok = next.row == end;
            end = next.col;
            ok
        });
        if chained {
            let slot = acc.entry((first.row, end)).or_insert_with(Scalar::zero);
            *slot = &*slot + &Scalar::Rational(c.clone());
        }
    }
    acc.retain(|_, v| !v.is_zero());
    acc
}

/// p at the given matrix units, by composing index chains word by word.
pub fn evaluate_on_units(p: &NcPolynomial, u: &UnitAssignment) -> Result<Matrix, UnitsError> {
    check(p, u)?;
    let mut out = Matrix::zeros(u.n, u.n, FieldKind::Rational);
    for ((r, c), v) in unit_value_sparse(p, u) {
        out.set(r - 1, c - 1, v);
    }
    Ok(out)
}

pub fn classify_value(v: &Matrix) -> Result<UnitValueClass, UnitsError> {
    let n = v.rows();
    let mut off = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && !v.get(i, j).is_zero() {
                off.push((i, j));
            }
        }
    }
    let diag_zero = (0..n).all(|i| v.get(i, i).is_zero());
    match (off.as_slice(), diag_zero) {
        ([], true) => Ok(UnitValueClass::Zero),
        ([], false) => Ok(UnitValueClass::Diagonal {
            entries: v.diagonal_entries(),
        }),
        ([(i, j)], true) => Ok(UnitValueClass::UnitMultiple {
            alpha: v.get(*i, *j).clone(),
            row: i + 1,
            col: j + 1,
        }),
        _ => Err(UnitsError::LemmaGraphViolation(v.to_string_rows())),
    }
}

fn classify_sparse(n: usize, value: &BTreeMap<(usize, usize), Scalar>) -> Result<UnitValueClass, UnitsError> {
    let off: Vec<_> = value.iter().filter(|((r, c), _)| r != c).collect();
    match (off.as_slice(), value.len()) {
        (_, 0) => Ok(UnitValueClass::Zero),
        ([], _) => Ok(UnitValueClass::Diagonal {
            entries: (1..=n)
                .map(|i| value.get(&(i, i)).cloned().unwrap_or_else(Scalar::zero))
                .collect(),
        }),
        ([((r, c), a)], 1) => Ok(UnitValueClass::UnitMultiple {
            alpha: (*a).clone(),
            row: *r,
            col: *c,
        }),
        _ => {
            let mut m = Matrix::zeros(n, n, FieldKind::Rational);
            for ((r, c), v) in value {
                m.set(r - 1, c - 1, v.clone());
            }
            Err(UnitsError::LemmaGraphViolation(m.to_string_rows()))
        }
    }
}

pub fn is_scalar_diagonal(entries: &[Scalar]) -> bool {
    entries.windows(2).all(|w| w[0] == w[1])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// Lexicographic position of the assignment in the full enumeration.
    pub index: u64,
    pub assignment: UnitAssignment,
    pub value: UnitValueClass,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub total: u64,
    pub zero: u64,
    pub diagonal: u64,
    /// Diagonal values that are nonzero scalars (counted inside `diagonal`).
    pub diagonal_scalar: u64,
    pub unit_multiple: u64,
    pub diag_nonscalar_witness: Option<Witness>,
    /// First witness per target position, keyed `"i,j"`.
    pub unit_multiple_witnesses: BTreeMap<String, Witness>,
    pub exhaustive: bool,
}

impl ScanReport {
    fn empty(exhaustive: bool) -> Self {
        ScanReport {
            total: 0,
            zero: 0,
            diagonal: 0,
            diagonal_scalar: 0,
            unit_multiple: 0,
            diag_nonscalar_witness: None,
            unit_multiple_witnesses: BTreeMap::new(),
            exhaustive,
        }
    }

    /// Every scanned value was zero.
    pub fn all_zero(&self) -> bool {
        self.zero == self.total
    }

    /// Every scanned value was a scalar matrix (zero included).
    pub fn all_scalar(&self) -> bool {
        self.zero + self.diagonal_scalar == self.total
    }

    pub fn unit_multiple_witness(&self, row: usize, col: usize) -> Option<&Witness> {
        self.unit_multiple_witnesses.get(&format!("{row},{col}"))
    }

    /// Associative merge; witnesses resolve to the lexicographically least index.
    pub fn merge(mut self, other: ScanReport) -> ScanReport {
        self.total += other.total;
        self.zero += other.zero;
        self.diagonal += other.diagonal;
        self.diagonal_scalar += other.diagonal_scalar;
        self.unit_multiple += other.unit_multiple;
        self.exhaustive &= other.exhaustive;
        self.diag_nonscalar_witness = match (self.diag_nonscalar_witness, other.diag_nonscalar_witness) {
            (Some(a), Some(b)) => Some(if a.index <= b.index { a } else { b }),
            (a, b) => a.or(b),
        };
        for (k, w) in other.unit_multiple_witnesses {
            match self.unit_multiple_witnesses.get(&k) {
                Some(cur) if cur.index <= w.index => {}
                _ => {
                    self.unit_multiple_witnesses.insert(k, w);
                }
            }
        }
        self
    }

    fn record(&mut self, index: u64, assignment: &UnitAssignment, class: UnitValueClass) {
        self.total += 1;
        match &class {
            UnitValueClass::Zero => self.zero += 1,
            UnitValueClass::Diagonal { entries } => {
                self.diagonal += 1;
                if is_scalar_diagonal(entries) {
                    self.diagonal_scalar += 1;
                } else if self.diag_nonscalar_witness.is_none() {
                    self.diag_nonscalar_witness = Some(Witness {
                        index,
                        assignment: assignment.clone(),
                        value: class.clone(),
                    });
                }
            }
            UnitValueClass::UnitMultiple { row, col, .. } => {
                self.unit_multiple += 1;
                self.unit_multiple_witnesses
                    .entry(format!("{row},{col}"))
                    .or_insert_with(|| Witness {
                        index,
                        assignment: assignment.clone(),
                        value: class.clone(),
                    });
            }
        }
    }
}

/// How many assignments to visit and whether sampling is allowed past the budget.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScanOptions {
    pub budget: u64,
    pub allow_sampling: bool,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            budget: 10_000_000,
            allow_sampling: false,
        }
    }
}

pub fn assignment_count(n: usize, m: usize) -> u128 {
    (n as u128).pow(2 * m as u32)
}

/// Scans the assignments with indices in `range` (exhaustive block).
pub fn scan_block(p: &NcPolynomial, n: usize, range: std::ops::Range<u64>) -> Result<ScanReport, UnitsError> {
    if !p.is_multilinear() {
        return Err(UnitsError::NotMultilinear);
    }
    let m = p.num_vars();
    let mut report = ScanReport::empty(true);
    for index in range {
        let a = UnitAssignment::from_index(n, m, index);
        let class = classify_sparse(n, &unit_value_sparse(p, &a))?;
        report.record(index, &a, class);
    }
    Ok(report)
}

/// Lexicographic scan of all n^{2m} unit assignments, or a deterministic
/// stride sample of `budget` of them when sampling is allowed.
pub fn scan_units(p: &NcPolynomial, n: usize, opts: ScanOptions) -> Result<ScanReport, UnitsError> {
    if !p.is_multilinear() {
        return Err(UnitsError::NotMultilinear);
    }
    let m = p.num_vars();
    let total = assignment_count(n, m);
    if total <= u128::from(opts.budget) {
        return scan_block(p, n, 0..total as u64);
    }
    if !opts.allow_sampling {
        return Err(UnitsError::BudgetExceeded {
            total,
            budget: opts.budget,
        });
    }
    let stride = total / u128::from(opts.budget.max(1));
    let mut report = ScanReport::empty(false);
    for k in 0..opts.budget {
        let index = (u128::from(k) * stride) as u64;
        let a = UnitAssignment::from_index(n, m, index);
        let class = classify_sparse(n, &unit_value_sparse(p, &a))?;
        report.record(index, &a, class);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncpoly::{builtin, parse};
    use crate::rng::task_rng;
    use rand::Rng;

    fn e(n: usize, i: usize, j: usize) -> Matrix {
        Matrix::unit(n, i, j)
    }

    #[test]
    fn evaluate_on_units_examples() {
        let x1x2 = parse("x1*x2", 2).unwrap();
        let a = UnitAssignment::from_pairs(3, &[(1, 2), (2, 3)]);
        assert_eq!(evaluate_on_units(&x1x2, &a).unwrap(), e(3, 1, 3));

        let comm = builtin("comm").unwrap();
        let a = UnitAssignment::from_pairs(3, &[(1, 2), (2, 1)]);
        assert_eq!(
            evaluate_on_units(&comm, &a).unwrap(),
            Matrix::diagonal(&[Scalar::from_int(1), Scalar::from_int(-1), Scalar::zero()])
        );
        let a = UnitAssignment::from_pairs(3, &[(1, 1), (1, 1)]);
        assert!(evaluate_on_units(&comm, &a).unwrap().is_zero());
    }

    #[test]
    fn classify_examples() {
        assert_eq!(
            classify_value(&Matrix::zeros(3, 3, FieldKind::Rational)).unwrap(),
            UnitValueClass::Zero
        );
        let d = Matrix::diagonal(&[Scalar::from_int(1), Scalar::from_int(-1), Scalar::zero()]);
        assert_eq!(
            classify_value(&d).unwrap(),
            UnitValueClass::Diagonal {
                entries: vec![Scalar::from_int(1), Scalar::from_int(-1), Scalar::zero()]
            }
        );
        assert_eq!(
            classify_value(&e(3, 1, 2).scale_int(3)).unwrap(),
            UnitValueClass::UnitMultiple {
                alpha: Scalar::from_int(3),
                row: 1,
                col: 2
            }
        );
        let bad = &e(3, 1, 2) + &e(3, 1, 1);
        assert!(matches!(classify_value(&bad), Err(UnitsError::LemmaGraphViolation(_))));
        let bad = &e(3, 1, 2) + &e(3, 2, 3);
        assert!(matches!(classify_value(&bad), Err(UnitsError::LemmaGraphViolation(_))));
    }

    #[test]
    fn iota_examples() {
        assert_eq!(iota(MatrixUnit::new(1, 2)), 1);
        assert_eq!(iota(MatrixUnit::new(5, 7)), 2);
        let cycle = UnitAssignment::from_pairs(3, &[(1, 2), (2, 3), (3, 1)]);
        let prod = parse("x1*x2*x3", 3).unwrap();
        assert_eq!(evaluate_on_units(&prod, &cycle).unwrap(), e(3, 1, 1));
        assert_eq!(iota_sum(&cycle), 0);
        let path = UnitAssignment::from_pairs(3, &[(1, 3), (3, 2)]);
        assert_eq!(
            evaluate_on_units(&parse("x1*x2", 2).unwrap(), &path).unwrap(),
            e(3, 1, 2)
        );
        assert_eq!(iota_sum(&path), 1);
    }

    // Oracle: classify by evaluating every assignment with generic matrix evaluation.
    fn brute_force_counts(p: &NcPolynomial, n: usize) -> (u64, u64, u64) {
        let m = p.num_vars();
        let (mut z, mut d, mut u) = (0, 0, 0);
        for idx in 0..assignment_count(n, m) as u64 {
            let v = p.evaluate(&UnitAssignment::from_index(n, m, idx).matrices()).unwrap();
            if v.is_zero() {
                z += 1;
            } else if v.is_diagonal() {
                d += 1;
            } else {
                u += 1;
            }
        }
        (z, d, u)
    }

    #[test]
    fn comm_scan_on_m2() {
        let comm = builtin("comm").unwrap();
        assert_eq!(brute_force_counts(&comm, 2), (6, 2, 8));
        let r = scan_units(&comm, 2, ScanOptions::default()).unwrap();
        assert_eq!((r.total, r.zero, r.diagonal, r.unit_multiple), (16, 6, 2, 8));
        assert!(r.exhaustive);
        let w = r.diag_nonscalar_witness.unwrap();
        assert_eq!(w.assignment, UnitAssignment::from_pairs(2, &[(1, 2), (2, 1)]));
        assert_eq!(
            w.value,
            UnitValueClass::Diagonal {
                entries: vec![Scalar::from_int(1), Scalar::from_int(-1)]
            }
        );
    }

    #[test]
    fn s4_is_identity_on_m2_and_c4m_is_central() {
        let r = scan_units(&builtin("s4").unwrap(), 2, ScanOptions::default()).unwrap();
        assert_eq!(r.total, 256);
        assert!(r.all_zero());
        let r = scan_units(&builtin("c4m").unwrap(), 2, ScanOptions::default()).unwrap();
        assert!(r.all_scalar() && !r.all_zero());
        assert!(r.diag_nonscalar_witness.is_none());
        assert_eq!(r.unit_multiple, 0);
    }

    #[test]
    fn fast_path_agrees_with_generic_evaluation() {
        let mut rng = task_rng(11, "matunits-fast-path");
        for name in ["comm", "s3", "s4", "c4m"] {
            let p = builtin(name).unwrap();
            for n in [2usize, 3] {
                for _ in 0..100 {
                    let idx = rng.gen_range(0..assignment_count(n, p.num_vars()) as u64);
                    let a = UnitAssignment::from_index(n, p.num_vars(), idx);
                    assert_eq!(evaluate_on_units(&p, &a).unwrap(), p.evaluate(&a.matrices()).unwrap());
                }
            }
        }
    }

    #[test]
    fn iota_sums_match_value_positions() {
        for name in ["comm", "s3", "c4m"] {
            let p = builtin(name).unwrap();
            for n in [2usize, 3] {
                let m = p.num_vars();
                for idx in 0..assignment_count(n, m) as u64 {
                    let a = UnitAssignment::from_index(n, m, idx);
                    let class = classify_value(&evaluate_on_units(&p, &a).unwrap()).unwrap();
                    let s = iota_sum(&a).rem_euclid(n as i64);
                    match class {
                        UnitValueClass::Zero => {}
                        UnitValueClass::Diagonal { .. } => assert_eq!(s, 0),
                        UnitValueClass::UnitMultiple { row, col, .. } => {
                            assert_eq!(s, (col as i64 - row as i64).rem_euclid(n as i64))
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn block_merge_matches_serial_scan() {
        let p = builtin("s3").unwrap();
        let serial = scan_units(&p, 3, ScanOptions::default()).unwrap();
        let total = assignment_count(3, 3) as u64;
        let cuts = [0, 17, 300, 301, total];
        let blocks: Vec<_> = cuts
            .windows(2)
            .map(|w| scan_block(&p, 3, w[0]..w[1]).unwrap())
            .collect();
        // Merge in reverse order to exercise witness resolution.
        let merged = blocks.into_iter().rev().reduce(ScanReport::merge).unwrap();
        assert_eq!(merged, serial);
    }

    #[test]
    fn budget_and_sampling() {
        let p = builtin("s3").unwrap();
        let tight = ScanOptions {
            budget: 100,
            allow_sampling: false,
        };
        assert!(matches!(
            scan_units(&p, 3, tight),
            Err(UnitsError::BudgetExceeded { .. })
        ));
        let sampled = scan_units(
            &p,
            3,
            ScanOptions {
                budget: 100,
                allow_sampling: true,
            },
        )
        .unwrap();
        assert_eq!(sampled.total, 100);
        assert!(!sampled.exhaustive);
        assert!(matches!(
            scan_units(&parse("x1*x1", 1).unwrap(), 2, ScanOptions::default()),
            Err(UnitsError::NotMultilinear)
        ));
    }

    #[test]
    fn lexicographic_index_decoding() {
        let a = UnitAssignment::from_index(2, 2, 0);
        assert_eq!(a, UnitAssignment::from_pairs(2, &[(1, 1), (1, 1)]));
        let a = UnitAssignment::from_index(2, 2, 15);
        assert_eq!(a, UnitAssignment::from_pairs(2, &[(2, 2), (2, 2)]));
        let a = UnitAssignment::from_index(3, 1, 5);
        assert_eq!(a, UnitAssignment::from_pairs(3, &[(2, 3)]));
    }
}
