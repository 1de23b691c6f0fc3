use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use super::cyclotomic::Cyclotomic;
use super::rational::{parse_rational, render_rational, Rational};
use super::ScalarParseError;

/// Which exact field a matrix lives over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", content = "order", rename_all = "snake_case")]
pub enum FieldKind {
    Rational,
    Cyclotomic(usize),
}

/// An exact field element: rational, or in ℚ(ε_n).
///
/// Rationals embed into every cyclotomic field, so arithmetic between a
/// `Rational` and a `Cyclotomic` promotes. Mixing two different orders panics.
#[derive(Clone)]
pub enum Scalar {
    Rational(Rational),
    Cyclotomic(Cyclotomic),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rational(Rational::zero())
    }

    pub fn one() -> Self {
        Scalar::Rational(Rational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::Rational(super::rational::int(n))
    }

    pub fn zero_in(kind: FieldKind) -> Self {
        Scalar::zero().promote(kind)
    }

    pub fn one_in(kind: FieldKind) -> Self {
        Scalar::one().promote(kind)
    }

    pub fn field_kind(&self) -> FieldKind {
        match self {
            Scalar::Rational(_) => FieldKind::Rational,
            Scalar::Cyclotomic(c) => FieldKind::Cyclotomic(c.order()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Cyclotomic(c) => c.is_zero(),
        }
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match self {
            Scalar::Rational(q) => Some(q.clone()),
            Scalar::Cyclotomic(c) => c.as_rational(),
        }
    }

    /// Re-expresses the value in `kind`. Panics when the value does not lie there.
    pub fn promote(self, kind: FieldKind) -> Self {
        match (self, kind) {
            (Scalar::Rational(q), FieldKind::Cyclotomic(n)) => Scalar::Cyclotomic(Cyclotomic::from_rational(n, q)),
            (Scalar::Cyclotomic(c), FieldKind::Cyclotomic(n)) => {
                assert_eq!(c.order(), n, "cannot move between cyclotomic orders");
                Scalar::Cyclotomic(c)
            }
            (Scalar::Cyclotomic(c), FieldKind::Rational) => Scalar::Rational(
                c.as_rational()
                    .expect("irrational cyclotomic value in a rational context"),
            ),
            (s @ Scalar::Rational(_), FieldKind::Rational) => s,
        }
    }

    pub fn inverse(&self) -> Option<Self> {
        match self {
            Scalar::Rational(q) if q.is_zero() => None,
            Scalar::Rational(q) => Some(Scalar::Rational(q.recip())),
            Scalar::Cyclotomic(c) => c.inverse().map(Scalar::Cyclotomic),
        }
    }

    /// ε ↦ ε⁻¹; identity on rationals.
    pub fn conjugate(&self) -> Self {
        match self {
            Scalar::Rational(_) => self.clone(),
            Scalar::Cyclotomic(c) => Scalar::Cyclotomic(c.conjugate()),
        }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        match self {
            Scalar::Rational(r) => Scalar::Rational(r * q),
            Scalar::Cyclotomic(c) => Scalar::Cyclotomic(c.scale(q)),
        }
    }

    pub fn parse(text: &str, kind: FieldKind) -> Result<Self, ScalarParseError> {
        match kind {
            FieldKind::Rational => parse_rational(text).map(Scalar::Rational),
            FieldKind::Cyclotomic(n) => Cyclotomic::parse(text, n).map(Scalar::Cyclotomic),
        }
    }

    fn binary(
        &self,
        rhs: &Scalar,
        rat: impl Fn(&Rational, &Rational) -> Rational,
        cyc: impl Fn(&Cyclotomic, &Cyclotomic) -> Cyclotomic,
    ) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(rat(a, b)),
            (Scalar::Cyclotomic(a), Scalar::Cyclotomic(b)) => Scalar::Cyclotomic(cyc(a, b)),
            (Scalar::Rational(a), Scalar::Cyclotomic(b)) => {
                Scalar::Cyclotomic(cyc(&Cyclotomic::from_rational(b.order(), a.clone()), b))
            }
            (Scalar::Cyclotomic(a), Scalar::Rational(b)) => {
                Scalar::Cyclotomic(cyc(a, &Cyclotomic::from_rational(a.order(), b.clone())))
            }
        }
    }
}

impl From<Rational> for Scalar {
    fn from(q: Rational) -> Self {
        Scalar::Rational(q)
    }
}

impl From<Cyclotomic> for Scalar {
    fn from(c: Cyclotomic) -> Self {
        Scalar::Cyclotomic(c)
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => a == b,
            (Scalar::Cyclotomic(a), Scalar::Cyclotomic(b)) => a == b,
            (Scalar::Rational(a), Scalar::Cyclotomic(b)) | (Scalar::Cyclotomic(b), Scalar::Rational(a)) => {
                b.as_rational().as_ref() == Some(a)
            }
        }
    }
}

impl Eq for Scalar {}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => write!(f, "{}", render_rational(q)),
            Scalar::Cyclotomic(c) => write!(f, "{c:?}"),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => f.write_str(&render_rational(q)),
            Scalar::Cyclotomic(c) => write!(f, "{c}"),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.binary(rhs, |a, b| a + b, |a, b| a + b)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.binary(rhs, |a, b| a - b, |a, b| a - b)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.binary(rhs, |a, b| a * b, |a, b| a * b)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(q) => Scalar::Rational(-q),
            Scalar::Cyclotomic(c) => Scalar::Cyclotomic(-c),
        }
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}
