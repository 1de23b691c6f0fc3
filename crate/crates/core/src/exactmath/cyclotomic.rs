//! Elements of the cyclotomic field ℚ(ε) = ℚ[x]/Φ_n(x), ε a primitive n-th root of unity.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Signed, Zero};

use super::poly;
use super::rational::{parse_rational, render_rational, Rational};
use super::ScalarParseError;

/// Reduction data for one order n, shared by all elements of that field.
#[derive(Debug)]
pub struct CyclotomicField {
    order: usize,
    /// Φ_n, monic, ascending; length `degree + 1`.
    modulus: Vec<Rational>,
    /// Reduced coefficient vectors of ε^j for j in 0..n.
    powers: Vec<Vec<Rational>>,
}

impl CyclotomicField {
    /// Cached field of order `n`.
    pub fn get(order: usize) -> Arc<CyclotomicField> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<CyclotomicField>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
        guard
            .entry(order)
            .or_insert_with(|| Arc::new(CyclotomicField::build(order)))
            .clone()
    }

    fn build(order: usize) -> Self {
        assert!(order >= 1, "cyclotomic order must be positive");
        let modulus: Vec<Rational> = poly::cyclotomic_polynomial(order)
            .into_iter()
            .map(Rational::from_integer)
            .collect();
        let degree = modulus.len() - 1;
        let mut field = CyclotomicField {
            order,
            modulus,
            powers: Vec::with_capacity(order),
        };
        let mut cur = vec![Rational::zero(); degree];
        cur[0] = Rational::one();
        for _ in 0..order {
            field.powers.push(cur.clone());
            let mut shifted = vec![Rational::zero()];
            shifted.extend(cur.iter().cloned());
            cur = field.reduce(shifted);
        }
        field
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// φ(n), the dimension over ℚ.
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    fn reduce(&self, mut v: Vec<Rational>) -> Vec<Rational> {
        let deg = self.degree();
        if v.len() > deg {
            for k in (deg..v.len()).rev() {
                let c = std::mem::replace(&mut v[k], Rational::zero());
                if c.is_zero() {
                    continue;
                }
                for (i, m) in self.modulus[..deg].iter().enumerate() {
                    v[k - deg + i] -= &c * m;
                }
            }
        }
        v.resize(deg, Rational::zero());
        v
    }
}

/// An element of ℚ(ε_n), stored as its reduced coefficient vector in the power basis.
#[derive(Clone)]
pub struct Cyclotomic {
    field: Arc<CyclotomicField>,
    coeffs: Vec<Rational>,
}

impl Cyclotomic {
    /// Element Σ coeffs[k]·ε^k; the input may have any length and is reduced mod Φ_n.
    pub fn new(order: usize, coeffs: Vec<Rational>) -> Self {
        let field = CyclotomicField::get(order);
        let coeffs = field.reduce(coeffs);
        Cyclotomic { field, coeffs }
    }

    pub fn from_rational(order: usize, q: Rational) -> Self {
        Self::new(order, vec![q])
    }

    pub fn zero(order: usize) -> Self {
        Self::new(order, Vec::new())
    }

    pub fn one(order: usize) -> Self {
        Self::from_rational(order, Rational::one())
    }

    /// ε^k for any integer k (negative exponents wrap around the cyclic group).
    pub fn epsilon_pow(order: usize, k: i64) -> Self {
        let field = CyclotomicField::get(order);
        let idx = k.rem_euclid(order as i64) as usize;
        let coeffs = field.powers[idx].clone();
        Cyclotomic { field, coeffs }
    }

    pub fn epsilon(order: usize) -> Self {
        Self::epsilon_pow(order, 1)
    }

    pub fn order(&self) -> usize {
        self.field.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational value when the element lies in ℚ.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    fn same_field(&self, other: &Self) {
        assert_eq!(
            self.field.order, other.field.order,
            "cyclotomic elements of different orders"
        );
    }

    /// The automorphism ε ↦ ε⁻¹ = ε^{n−1}.
    pub fn conjugate(&self) -> Self {
        let n = self.field.order;
        let deg = self.field.degree();
        let mut out = vec![Rational::zero(); deg];
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let img = &self.field.powers[(n - k % n) % n];
            for (o, p) in out.iter_mut().zip(img) {
                *o += c * p;
            }
        }
        Cyclotomic {
            field: self.field.clone(),
            coeffs: out,
        }
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let inv = poly::inverse_mod(&self.coeffs, &self.field.modulus)?;
        Some(Cyclotomic {
            coeffs: self.field.reduce(inv),
            field: self.field.clone(),
        })
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Cyclotomic {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Cyclotomic::one(self.order());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Parses a polynomial in `e` such as `1/2 - 1/2*e + 3*e^2`.
    pub fn parse(text: &str, order: usize) -> Result<Self, ScalarParseError> {
        let mut coeffs: Vec<Rational> = Vec::new();
        for (pos, sign, body) in split_signed_terms(text)? {
            let (coef_text, power) = match body.find('e') {
                None => (body, 0usize),
                Some(idx) => {
                    let head = body[..idx].trim_end();
                    let coef = match head.strip_suffix('*') {
                        Some(c) => c.trim(),
                        None if head.is_empty() => "",
                        None => {
                            return Err(ScalarParseError {
                                position: pos,
                                message: "expected `*` before `e`".into(),
                            })
                        }
                    };
                    let tail = body[idx + 1..].trim_start();
                    let power = if tail.is_empty() {
                        1
                    } else if let Some(exp) = tail.strip_prefix('^') {
                        exp.trim().parse::<usize>().map_err(|_| ScalarParseError {
                            position: pos + idx + 1,
                            message: format!("invalid exponent `{}`", exp.trim()),
                        })?
                    } else {
                        return Err(ScalarParseError {
                            position: pos + idx + 1,
                            message: format!("unexpected `{tail}` after `e`"),
                        });
                    };
                    (coef, power)
                }
            };
            let coef = if coef_text.is_empty() {
                if power == 0 {
                    return Err(ScalarParseError {
                        position: pos,
                        message: "empty term".into(),
                    });
                }
                Rational::one()
            } else {
                parse_rational(coef_text).map_err(|e| ScalarParseError {
                    position: pos + e.position,
                    message: e.message,
                })?
            };
            if coeffs.len() <= power {
                coeffs.resize(power + 1, Rational::zero());
            }
            if sign < 0 {
                coeffs[power] -= coef;
            } else {
                coeffs[power] += coef;
            }
        }
        // Powers ≥ n reduce through εⁿ = 1 before the Φ_n reduction.
        let mut folded = vec![Rational::zero(); order];
        for (k, c) in coeffs.into_iter().enumerate() {
            folded[k % order] += c;
        }
        Ok(Cyclotomic::new(order, folded))
    }
}

/// Splits `a + b - c` into `(offset, sign, trimmed body)` triples.
pub(crate) fn split_signed_terms<'a>(text: &'a str) -> Result<Vec<(usize, i8, &'a str)>, ScalarParseError> {
    let mut out = Vec::new();
    let bytes = text.as_bytes();
    let mut sign: i8 = 1;
    let mut start: Option<usize> = None;
    let mut expect_term = true;
    let flush = |out: &mut Vec<(usize, i8, &'a str)>, s: usize, e: usize, sign: i8| {
        let raw = &text[s..e];
        let lead = raw.len() - raw.trim_start().len();
        out.push((s + lead, sign, raw.trim()));
    };
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'+' | b'-' => {
                if let Some(s) = start.take() {
                    flush(&mut out, s, i, sign);
                    sign = if b == b'-' { -1 } else { 1 };
                    expect_term = true;
                } else if expect_term && out.is_empty() && sign == 1 && b == b'-' {
                    sign = -1;
                } else {
                    return Err(ScalarParseError {
                        position: i,
                        message: "unexpected sign".into(),
                    });
                }
            }
            b' ' | b'\t' => {}
            _ => {
                if start.is_none() {
                    start = Some(i);
                    expect_term = false;
                }
            }
        }
    }
    match start {
        Some(s) => flush(&mut out, s, text.len(), sign),
        None => {
            return Err(ScalarParseError {
                position: text.len(),
                message: "expected a term".into(),
            })
        }
    }
    Ok(out)
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        self.field.order == other.field.order && self.coeffs == other.coeffs
    }
}

impl Eq for Cyclotomic {}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclotomic[{}]({})", self.field.order, self)
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let mag_text = render_rational(&mag);
            match k {
                0 => f.write_str(&mag_text)?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag_text}*")?;
                    }
                    if k == 1 {
                        f.write_str("e")?;
                    } else {
                        write!(f, "e^{k}")?;
                    }
                }
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl Add for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.same_field(rhs);
        Cyclotomic {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.same_field(rhs);
        Cyclotomic {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.same_field(rhs);
        let prod = poly::mul(&self.coeffs, &rhs.coeffs);
        Cyclotomic {
            coeffs: self.field.reduce(prod),
            field: self.field.clone(),
        }
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}
