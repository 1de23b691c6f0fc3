//! Harmonic bases of the diagonal matrices over ℚ(ε_n).
//!
//! e_k = (1, ε^k, ε^{2k}, …, ε^{(n−1)k}) is orthogonal for the pairing
//! ⟨u, v⟩ = Σ u_i·conj(v_i), with ⟨e_k, e_s⟩ = n·δ_{ks}. The swapped vectors
//! q_k (positions 0 and 1 exchanged) and, for n = 5, r_k (positions 0, 1, 2
//! reordered to ε^{2k}, ε^k, 1) measure how a diagonal value decomposes once
//! two or three eigenvalue positions are permuted.

use serde::Serialize;
use thiserror::Error;

use crate::exactmath::{Cyclotomic, FieldKind, Matrix, MatrixError, Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HarmonicError {
    #[error("r_k is defined for n = 5 only (got n = {0})")]
    RVariantNeedsFive(usize),
    #[error("index k = {k} out of range for n = {n}")]
    IndexOutOfRange { k: usize, n: usize },
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("mixed cyclotomic orders: {0:?} vs {1:?}")]
    MixedOrder(FieldKind, FieldKind),
    #[error("expected a 4x4 matrix, got {0}x{1}")]
    WrongSize(usize, usize),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HarmonicVariant {
    E,
    Q,
    R,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct HarmonicIndex {
    pub k: usize,
    pub variant: HarmonicVariant,
}

impl HarmonicIndex {
    pub fn e(k: usize) -> Self {
        HarmonicIndex {
            k,
            variant: HarmonicVariant::E,
        }
    }
    pub fn q(k: usize) -> Self {
        HarmonicIndex {
            k,
            variant: HarmonicVariant::Q,
        }
    }
    pub fn r(k: usize) -> Self {
        HarmonicIndex {
            k,
            variant: HarmonicVariant::R,
        }
    }
}

/// Diagonal entries of length n, all in ℚ(ε_n).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagonalVector {
    order: usize,
    entries: Vec<Scalar>,
}

impl DiagonalVector {
    /// Entries are promoted into ℚ(ε_order); the length must equal `order`.
    pub fn new(order: usize, entries: Vec<Scalar>) -> Result<Self, HarmonicError> {
        if entries.len() != order {
            return Err(HarmonicError::LengthMismatch(entries.len(), order));
        }
        let kind = FieldKind::Cyclotomic(order);
        for e in &entries {
            match e.field_kind() {
                FieldKind::Rational => {}
                k if k == kind => {}
                k => return Err(HarmonicError::MixedOrder(k, kind)),
            }
        }
        Ok(DiagonalVector {
            order,
            entries: entries.into_iter().map(|e| e.promote(kind)).collect(),
        })
    }

    pub fn from_rationals(values: &[Rational]) -> Self {
        let n = values.len();
        Self::new(n, values.iter().cloned().map(Scalar::Rational).collect()).unwrap()
    }

    pub fn from_matrix(a: &Matrix) -> Result<Self, HarmonicError> {
        Self::new(a.rows(), a.diagonal_entries())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn to_matrix(&self) -> Matrix {
        Matrix::diagonal(&self.entries)
    }

    fn combine(&self, other: &Self, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Self {
        DiagonalVector {
            order: self.order,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a + b)
    }

    /// Entry j becomes entry j + r (mod n): the diagonal of χ^r·d·χ^{−r}.
    /// Takes α·e_k + β·e_l to ε^{rk}α·e_k + ε^{rl}β·e_l.
    pub fn cyclic_shift(&self, r: i64) -> Self {
        let n = self.entries.len() as i64;
        DiagonalVector {
            order: self.order,
            entries: (0..n)
                .map(|j| self.entries[(j + r).rem_euclid(n) as usize].clone())
                .collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        DiagonalVector {
            order: self.order,
            entries: self.entries.iter().map(|a| a * c).collect(),
        }
    }
}

fn eps(n: usize, k: i64) -> Scalar {
    Scalar::Cyclotomic(Cyclotomic::epsilon_pow(n, k))
}

pub fn harmonic_vector(n: usize, idx: HarmonicIndex) -> Result<DiagonalVector, HarmonicError> {
    if idx.k >= n {
        return Err(HarmonicError::IndexOutOfRange { k: idx.k, n });
    }
    let k = idx.k as i64;
    let mut entries: Vec<Scalar> = (0..n as i64).map(|j| eps(n, j * k)).collect();
    match idx.variant {
        HarmonicVariant::E => {}
        HarmonicVariant::Q => entries.swap(0, 1),
        HarmonicVariant::R => {
            if n != 5 {
                return Err(HarmonicError::RVariantNeedsFive(n));
            }
            entries.swap(0, 2);
        }
    }
    DiagonalVector::new(n, entries)
}

/// ⟨u, v⟩ = Σ u_i · conj(v_i), conj: ε ↦ ε⁻¹.
pub fn pairing(u: &DiagonalVector, v: &DiagonalVector) -> Result<Scalar, HarmonicError> {
    if u.entries.len() != v.entries.len() {
        return Err(HarmonicError::LengthMismatch(u.entries.len(), v.entries.len()));
    }
    if u.order != v.order {
        return Err(HarmonicError::MixedOrder(
            FieldKind::Cyclotomic(u.order),
            FieldKind::Cyclotomic(v.order),
        ));
    }
    Ok(u.entries
        .iter()
        .zip(&v.entries)
        .fold(Scalar::zero_in(FieldKind::Cyclotomic(u.order)), |acc, (a, b)| {
            &acc + &(a * &b.conjugate())
        }))
}

/// Coefficients h_0..h_{n−1} of d = Σ h_s·e_s, and the indices where h_s ≠ 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub coefficients: Vec<Scalar>,
    pub support: Vec<usize>,
}

impl Decomposition {
    pub fn reconstruct(&self) -> DiagonalVector {
        let n = self.coefficients.len();
        let mut acc = DiagonalVector::new(n, vec![Scalar::zero(); n]).unwrap();
        for (s, h) in self.coefficients.iter().enumerate() {
            acc = acc.add(&harmonic_vector(n, HarmonicIndex::e(s)).unwrap().scale(h));
        }
        acc
    }
}

/// h_s = ⟨d, e_s⟩ / n.
pub fn dft_decompose(d: &DiagonalVector) -> Decomposition {
    let n = d.order;
    let inv_n = Rational::new(1.into(), (n as i64).into());
    let coefficients: Vec<Scalar> = (0..n)
        .map(|s| {
            let es = harmonic_vector(n, HarmonicIndex::e(s)).unwrap();
            pairing(d, &es).unwrap().scale(&inv_n)
        })
        .collect();
    let support = (0..n).filter(|&s| !coefficients[s].is_zero()).collect();
    Decomposition { coefficients, support }
}

/// Decomposes Σ c·v_idx (v one of e, q, r) in the e-basis.
pub fn expand_in_e_basis(n: usize, combo: &[(Scalar, HarmonicIndex)]) -> Result<Decomposition, HarmonicError> {
    let kind = FieldKind::Cyclotomic(n);
    let mut acc = DiagonalVector::new(n, vec![Scalar::zero(); n])?;
    for (c, idx) in combo {
        match c.field_kind() {
            FieldKind::Rational => {}
            k if k == kind => {}
            k => return Err(HarmonicError::MixedOrder(k, kind)),
        }
        acc = acc.add(&harmonic_vector(n, *idx)?.scale(c));
    }
    Ok(dft_decompose(&acc))
}

/// For a 4×4 matrix: true iff the λ³ and λ¹ coefficients of the
/// characteristic polynomial vanish, i.e. the spectrum has the form
/// (λ₁, λ₂, −λ₁, −λ₂).
pub fn spectrum_pattern_even(a: &Matrix) -> Result<bool, HarmonicError> {
    if a.rows() != 4 || a.cols() != 4 {
        return Err(HarmonicError::WrongSize(a.rows(), a.cols()));
    }
    let cp = a.char_poly()?;
    Ok(cp[3].is_zero() && cp[1].is_zero())
}
