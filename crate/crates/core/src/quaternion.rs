//! Rational Hamilton quaternions (−1, −1 / ℚ) and 2×2 matrices over them.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use rand::Rng;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::exactmath::{int, parse_rational, render_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuaternionError {
    #[error("zero quaternion has no inverse")]
    ZeroDivisor,
    #[error("top-right entry b is zero; the form is not parametrized")]
    ZeroB,
    #[error("parse error at {position}: {message}")]
    Parse { position: usize, message: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Quaternion {
    pub w: Rational,
    pub x: Rational,
    pub y: Rational,
    pub z: Rational,
}

impl Quaternion {
    pub fn new(w: Rational, x: Rational, y: Rational, z: Rational) -> Self {
        Quaternion { w, x, y, z }
    }

    pub fn from_ints(w: i64, x: i64, y: i64, z: i64) -> Self {
        Quaternion::new(int(w), int(x), int(y), int(z))
    }

    pub fn real(w: Rational) -> Self {
        Quaternion::new(w, Rational::zero(), Rational::zero(), Rational::zero())
    }

    pub fn zero() -> Self {
        Quaternion::default()
    }

    pub fn one() -> Self {
        Quaternion::from_ints(1, 0, 0, 0)
    }

    pub fn i() -> Self {
        Quaternion::from_ints(0, 1, 0, 0)
    }

    pub fn j() -> Self {
        Quaternion::from_ints(0, 0, 1, 0)
    }

    pub fn k() -> Self {
        Quaternion::from_ints(0, 0, 0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.w.is_zero() && self.x.is_zero() && self.y.is_zero() && self.z.is_zero()
    }

    /// The rational value when the imaginary part vanishes.
    pub fn as_rational(&self) -> Option<&Rational> {
        (self.x.is_zero() && self.y.is_zero() && self.z.is_zero()).then_some(&self.w)
    }

    pub fn conj(&self) -> Self {
        Quaternion::new(self.w.clone(), -&self.x, -&self.y, -&self.z)
    }

    /// Reduced norm w² + x² + y² + z².
    pub fn norm(&self) -> Rational {
        &self.w * &self.w + &self.x * &self.x + &self.y * &self.y + &self.z * &self.z
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Quaternion::new(&self.w * c, &self.x * c, &self.y * c, &self.z * c)
    }

    pub fn inverse(&self) -> Result<Self, QuaternionError> {
        if self.is_zero() {
            return Err(QuaternionError::ZeroDivisor);
        }
        Ok(self.conj().scale(&self.norm().recip()))
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> Self {
        let mut c = || int(rng.gen_range(-bound..=bound));
        Quaternion::new(c(), c(), c(), c())
    }

    /// Reads sums of terms `c`, `c*i`, `c*j`, `c*k`, `i`, `-j`, … with rational `c`.
    pub fn parse(text: &str) -> Result<Self, QuaternionError> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(QuaternionError::Parse {
                position: 0,
                message: "empty quaternion".into(),
            });
        }
        let mut q = Quaternion::zero();
        let mut start = 0;
        let bytes = compact.as_bytes();
        for end in 1..=bytes.len() {
            let at_boundary =
                end == bytes.len() || ((bytes[end] == b'+' || bytes[end] == b'-') && bytes[end - 1] != b'/');
            if at_boundary {
                q = &q + &parse_term(&compact[start..end], start)?;
                start = end;
            }
        }
        Ok(q)
    }
}

fn parse_term(term: &str, offset: usize) -> Result<Quaternion, QuaternionError> {
    let err = |message: String| QuaternionError::Parse {
        position: offset,
        message,
    };
    let (sign, body) = match term.as_bytes().first() {
        Some(b'-') => (-1, &term[1..]),
        Some(b'+') => (1, &term[1..]),
        _ => (1, term),
    };
    let (coeff_text, unit) = match body.chars().last() {
        Some(u @ ('i' | 'j' | 'k')) => {
            let c = &body[..body.len() - 1];
            (c.strip_suffix('*').unwrap_or(c), Some(u))
        }
        _ => (body, None),
    };
    let coeff = if coeff_text.is_empty() {
        if unit.is_none() {
            return Err(err(format!("empty term `{term}`")));
        }
        Rational::one()
    } else {
        parse_rational(coeff_text).map_err(|e| err(e.message))?
    } * int(sign);
    let z = Rational::zero();
    Ok(match unit {
        None => Quaternion::new(coeff, z.clone(), z.clone(), z),
        Some('i') => Quaternion::new(z.clone(), coeff, z.clone(), z),
        Some('j') => Quaternion::new(z.clone(), z.clone(), coeff, z),
        _ => Quaternion::new(z.clone(), z.clone(), z, coeff),
    })
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<(bool, String)> = Vec::new();
        for (c, unit) in [(&self.w, ""), (&self.x, "i"), (&self.y, "j"), (&self.z, "k")] {
            if c.is_zero() {
                continue;
            }
            let neg = *c < Rational::zero();
            let mag = if neg { -c } else { c.clone() };
            let text = match (unit, mag.is_one()) {
                ("", _) => render_rational(&mag),
                (u, true) => u.to_string(),
                (u, false) => format!("{}*{u}", render_rational(&mag)),
            };
            parts.push((neg, text));
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        for (idx, (neg, text)) in parts.iter().enumerate() {
            match (idx, neg) {
                (0, true) => write!(f, "-{text}")?,
                (0, false) => write!(f, "{text}")?,
                (_, true) => write!(f, " - {text}")?,
                (_, false) => write!(f, " + {text}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for Quaternion {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl Add for &Quaternion {
    type Output = Quaternion;
    fn add(self, o: &Quaternion) -> Quaternion {
        Quaternion::new(&self.w + &o.w, &self.x + &o.x, &self.y + &o.y, &self.z + &o.z)
    }
}

impl Sub for &Quaternion {
    type Output = Quaternion;
    fn sub(self, o: &Quaternion) -> Quaternion {
        Quaternion::new(&self.w - &o.w, &self.x - &o.x, &self.y - &o.y, &self.z - &o.z)
    }
}

impl Neg for &Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion::new(-&self.w, -&self.x, -&self.y, -&self.z)
    }
}

impl Mul for &Quaternion {
    type Output = Quaternion;
    fn mul(self, o: &Quaternion) -> Quaternion {
        let (a1, b1, c1, d1) = (&self.w, &self.x, &self.y, &self.z);
        let (a2, b2, c2, d2) = (&o.w, &o.x, &o.y, &o.z);
        Quaternion::new(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )
    }
}

/// Row-major [[a, b], [c, d]].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuatMatrix2(pub [[Quaternion; 2]; 2]);

impl QuatMatrix2 {
    pub fn new(a: Quaternion, b: Quaternion, c: Quaternion, d: Quaternion) -> Self {
        QuatMatrix2([[a, b], [c, d]])
    }

    pub fn scalar(alpha: &Rational) -> Self {
        let s = Quaternion::real(alpha.clone());
        QuatMatrix2::new(s.clone(), Quaternion::zero(), Quaternion::zero(), s)
    }

    pub fn get(&self, i: usize, j: usize) -> &Quaternion {
        &self.0[i][j]
    }

    pub fn square(&self) -> Self {
        self * self
    }
}

impl Mul for &QuatMatrix2 {
    type Output = QuatMatrix2;
    fn mul(self, o: &QuatMatrix2) -> QuatMatrix2 {
        let e = |i: usize, j: usize| &(self.get(i, 0) * o.get(0, j)) + &(self.get(i, 1) * o.get(1, j));
        QuatMatrix2::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }
}

/// [[a, b], [−b⁻¹(a² − α), −b⁻¹ab]], which squares to α·I.
pub fn build_square_central(a: &Quaternion, b: &Quaternion, alpha: &Rational) -> Result<QuatMatrix2, QuaternionError> {
    if b.is_zero() {
        return Err(QuaternionError::ZeroB);
    }
    let b_inv = b.inverse()?;
    let a2_minus = &(a * a) - &Quaternion::real(alpha.clone());
    let c = -&(&b_inv * &a2_minus);
    let d = -&(&(&b_inv * a) * b);
    Ok(QuatMatrix2::new(a.clone(), b.clone(), c, d))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormCheck {
    pub is_form: bool,
    #[serde(serialize_with = "serialize_opt_rational")]
    pub alpha: Option<Rational>,
}

fn serialize_opt_rational<S: Serializer>(q: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match q {
        Some(q) => s.serialize_str(&render_rational(q)),
        None => s.serialize_none(),
    }
}

/// Checks d = −b⁻¹ab and that α = a² + bc is rational.
pub fn verify_square_central_form(m: &QuatMatrix2) -> Result<FormCheck, QuaternionError> {
    let [[a, b], [c, d]] = &m.0;
    if b.is_zero() {
        return Err(QuaternionError::ZeroB);
    }
    let b_inv = b.inverse()?;
    let d_ok = *d == -&(&(&b_inv * a) * b);
    let alpha = (&(a * a) + &(b * c)).as_rational().cloned();
    Ok(match (d_ok, alpha) {
        (true, Some(alpha)) => FormCheck {
            is_form: true,
            alpha: Some(alpha),
        },
        _ => FormCheck {
            is_form: false,
            alpha: None,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::ratio;
    use crate::rng::task_rng;

    fn q(text: &str) -> Quaternion {
        Quaternion::parse(text).unwrap()
    }

    #[test]
    fn hamilton_relations() {
        let (i, j, k) = (Quaternion::i(), Quaternion::j(), Quaternion::k());
        let minus_one = Quaternion::from_ints(-1, 0, 0, 0);
        assert_eq!(&i * &i, minus_one);
        assert_eq!(&j * &j, minus_one);
        assert_eq!(&k * &k, minus_one);
        assert_eq!(&i * &j, k);
        assert_eq!(&j * &i, -&k);
        assert_eq!(&j * &k, i);
        assert_eq!(&k * &i, j);
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(Quaternion::i().inverse().unwrap(), -&Quaternion::i());
        let expect = Quaternion::from_ints(1, -1, -1, -1).scale(&ratio(1, 4));
        assert_eq!(q("1+i+j+k").inverse().unwrap(), expect);
        assert_eq!(Quaternion::zero().inverse(), Err(QuaternionError::ZeroDivisor));
    }

    #[test]
    fn parse_and_render() {
        assert_eq!(
            q("1/2 - 3*i + j - 2/3*k"),
            Quaternion::new(ratio(1, 2), int(-3), int(1), ratio(-2, 3))
        );
        assert_eq!(q("-1/2*j"), Quaternion::new(int(0), int(0), ratio(-1, 2), int(0)));
        assert_eq!(q("0"), Quaternion::zero());
        for text in ["1 - i + 2*j - 1/3*k", "-k", "5", "0"] {
            assert_eq!(q(text).to_string(), text);
        }
        assert!(Quaternion::parse("1+x").is_err());
        assert!(Quaternion::parse("").is_err());
    }

    #[test]
    fn square_central_examples() {
        let (i, j) = (Quaternion::i(), Quaternion::j());
        let a = build_square_central(&Quaternion::zero(), &j, &int(5)).unwrap();
        assert_eq!(
            a,
            QuatMatrix2::new(Quaternion::zero(), j.clone(), q("-5j"), Quaternion::zero())
        );
        assert_eq!(a.square(), QuatMatrix2::scalar(&int(5)));

        let a = build_square_central(&i, &j, &int(2)).unwrap();
        assert_eq!(a, QuatMatrix2::new(i.clone(), j.clone(), q("-3j"), i.clone()));
        assert_eq!(a.square(), QuatMatrix2::scalar(&int(2)));
        assert_eq!(
            verify_square_central_form(&a).unwrap(),
            FormCheck {
                is_form: true,
                alpha: Some(int(2))
            }
        );

        let nil = build_square_central(&i, &j, &int(0)).unwrap();
        assert_eq!(nil.square(), QuatMatrix2::scalar(&int(0)));

        let wrong = QuatMatrix2::new(i.clone(), j.clone(), q("-3j"), -&i);
        assert!(!verify_square_central_form(&wrong).unwrap().is_form);

        let companion = QuatMatrix2::new(Quaternion::zero(), Quaternion::one(), q("7/2"), Quaternion::zero());
        assert_eq!(verify_square_central_form(&companion).unwrap().alpha, Some(ratio(7, 2)));

        assert_eq!(
            build_square_central(&i, &Quaternion::zero(), &int(1)),
            Err(QuaternionError::ZeroB)
        );
    }

    #[test]
    fn random_square_central_round_trip() {
        let mut rng = task_rng(0, "quaternion-test");
        for _ in 0..200 {
            let a = Quaternion::random(&mut rng, 5);
            let b = loop {
                let b = Quaternion::random(&mut rng, 5);
                if !b.is_zero() {
                    break b;
                }
            };
            let alpha = ratio(rng.gen_range(-20..=20), rng.gen_range(1..=5));
            let m = build_square_central(&a, &b, &alpha).unwrap();
            assert_eq!(m.square(), QuatMatrix2::scalar(&alpha));
            assert_eq!(verify_square_central_form(&m).unwrap().alpha, Some(alpha));
            let inv = b.inverse().unwrap();
            assert_eq!(&b * &inv, Quaternion::one());
            assert_eq!(&inv * &b, Quaternion::one());
        }
    }

    #[test]
    fn norm_is_multiplicative() {
        let mut rng = task_rng(1, "quaternion-norm");
        for _ in 0..100 {
            let (p, r) = (Quaternion::random(&mut rng, 9), Quaternion::random(&mut rng, 9));
            assert_eq!((&p * &r).norm(), p.norm() * r.norm());
            assert_eq!(p.norm().is_zero(), p.is_zero());
        }
    }
}
