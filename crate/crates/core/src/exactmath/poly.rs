//! Dense univariate polynomials over ℚ, coefficients in ascending degree.
//!
//! Only what the cyclotomic field needs: multiplication, division with
//! remainder and the extended Euclidean algorithm.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::rational::Rational;

pub(crate) fn trim(p: &mut Vec<Rational>) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

pub(crate) fn mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

pub(crate) fn sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let len = a.len().max(b.len());
    let mut out: Vec<Rational> = (0..len)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(Rational::zero);
            match b.get(i) {
                Some(y) => x - y,
                None => x,
            }
        })
        .collect();
    trim(&mut out);
    out
}

/// Returns `(quotient, remainder)`. `divisor` must be nonzero after trimming.
pub(crate) fn divrem(dividend: &[Rational], divisor: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut rem = dividend.to_vec();
    trim(&mut rem);
    let mut d = divisor.to_vec();
    trim(&mut d);
    assert!(!d.is_empty(), "polynomial division by zero");
    if rem.len() < d.len() {
        return (Vec::new(), rem);
    }
    let lead = d.last().unwrap().clone();
    let mut quot = vec![Rational::zero(); rem.len() - d.len() + 1];
    while rem.len() >= d.len() {
        let shift = rem.len() - d.len();
        let c = rem.last().unwrap() / &lead;
        for (i, di) in d.iter().enumerate() {
            rem[shift + i] -= &c * di;
        }
        quot[shift] = c;
        rem.pop();
        trim(&mut rem);
    }
    trim(&mut quot);
    (quot, rem)
}

/// Inverse of `a` modulo `modulus`, or `None` when they share a factor.
pub(crate) fn inverse_mod(a: &[Rational], modulus: &[Rational]) -> Option<Vec<Rational>> {
    // Invariant: s·a ≡ r (mod modulus) for both (r0,s0) and (r1,s1).
    let mut r0 = modulus.to_vec();
    let mut r1 = a.to_vec();
    trim(&mut r1);
    let mut s0: Vec<Rational> = Vec::new();
    let mut s1: Vec<Rational> = vec![Rational::one()];
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1);
        let s = sub(&s0, &mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    if r0.len() != 1 {
        return None;
    }
    let lead = r0[0].clone();
    let (_, inv) = divrem(&s0.iter().map(|c| c / &lead).collect::<Vec<_>>(), modulus);
    Some(inv)
}

fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// Integer coefficients of the n-th cyclotomic polynomial Φ_n, ascending.
///
/// Computed as (xⁿ − 1) divided by Φ_d for every proper divisor d of n.
pub fn cyclotomic_polynomial(n: usize) -> Vec<BigInt> {
    assert!(n >= 1, "cyclotomic polynomial needs n >= 1");
    let mut num = vec![Rational::zero(); n + 1];
    num[0] = -Rational::one();
    num[n] = Rational::one();
    for d in divisors(n).into_iter().filter(|&d| d < n) {
        let phi_d: Vec<Rational> = cyclotomic_polynomial(d)
            .into_iter()
            .map(Rational::from_integer)
            .collect();
        let (q, r) = divrem(&num, &phi_d);
        debug_assert!(r.is_empty());
        num = q;
    }
    num.into_iter()
        .map(|c| {
            debug_assert!(c.is_integer());
            c.to_integer()
        })
        .collect()
}
