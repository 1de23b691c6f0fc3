//! Polynomials in noncommuting variables x1..xm with rational coefficients.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::exactmath::{int, render_rational, FieldKind, Matrix, MatrixError, Rational, Scalar};

/// A monomial: the sequence of (1-based) variable indices, left to right.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }
}

// Length first, then lexicographic.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("variable x{index} at position {position} exceeds the {num_vars} declared variables")]
    VariableOutOfRange {
        position: usize,
        index: usize,
        num_vars: usize,
    },
    #[error("unknown builtin polynomial `{0}`")]
    UnknownBuiltin(String),
}

impl ParseError {
    pub fn position(&self) -> Option<usize> {
        match self {
            ParseError::Syntax { position, .. } | ParseError::VariableOutOfRange { position, .. } => Some(*position),
            ParseError::UnknownBuiltin(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("expected {expected} arguments, got {got}")]
    ArgumentCount { expected: usize, got: usize },
    #[error("arguments must be square matrices of one common size")]
    SizeMismatch,
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// Element of ℚ⟨x1, …, xm⟩: a finite map from words to nonzero coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct NcPolynomial {
    num_vars: usize,
    terms: BTreeMap<Word, Rational>,
}

impl NcPolynomial {
    pub fn zero(num_vars: usize) -> Self {
        NcPolynomial {
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    /// The single variable x_index.
    pub fn variable(num_vars: usize, index: usize) -> Self {
        assert!((1..=num_vars).contains(&index));
        Self::from_terms(num_vars, [(Word(vec![index]), Rational::one())])
    }

    /// Combines like terms and drops zeros.
    pub fn from_terms(num_vars: usize, terms: impl IntoIterator<Item = (Word, Rational)>) -> Self {
        let mut p = Self::zero(num_vars);
        for (w, c) in terms {
            assert!(
                w.0.iter().all(|&l| (1..=num_vars).contains(&l)),
                "letter out of range in {w:?}"
            );
            p.add_term(w, c);
        }
        p
    }

    fn add_term(&mut self, w: Word, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }

    pub fn coefficient(&self, w: &[usize]) -> Rational {
        self.terms
            .get(&Word(w.to_vec()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Every word contains each of x1..xm exactly once.
    pub fn is_multilinear(&self) -> bool {
        let m = self.num_vars;
        self.terms.keys().all(|w| {
            if w.len() != m {
                return false;
            }
            let mut seen = vec![false; m + 1];
            w.0.iter().all(|&l| !std::mem::replace(&mut seen[l], true))
        })
    }

    fn widen(&self, num_vars: usize) -> usize {
        self.num_vars.max(num_vars)
    }

    pub fn add(&self, other: &NcPolynomial) -> NcPolynomial {
        let mut out = self.clone();
        out.num_vars = self.widen(other.num_vars);
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &NcPolynomial) -> NcPolynomial {
        self.add(&other.scale(&int(-1)))
    }

    pub fn scale(&self, c: &Rational) -> NcPolynomial {
        Self::from_terms(self.num_vars, self.terms.iter().map(|(w, v)| (w.clone(), v * c)))
    }

    /// Noncommutative product with like-term collection.
    pub fn mul(&self, other: &NcPolynomial) -> NcPolynomial {
        let mut out = Self::zero(self.widen(other.num_vars));
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                out.add_term(w1.concat(w2), c1 * c2);
            }
        }
        out
    }

    /// p^ν expanded as a polynomial. Panics for ν = 0 (no constant words here).
    pub fn pow(&self, nu: u32) -> NcPolynomial {
        assert!(nu >= 1, "pow needs ν ≥ 1");
        let mut acc = self.clone();
        for _ in 1..nu {
            acc = acc.mul(self);
        }
        acc
    }

    /// Σ_w c_w · Π args[letters of w], exactly.
    pub fn evaluate(&self, args: &[Matrix]) -> Result<Matrix, EvalError> {
        let (n, field) = check_args(self.num_vars, args)?;
        let mut acc = Matrix::zeros(n, n, field);
        for (w, c) in &self.terms {
            let mut prod = Matrix::identity(n, field);
            for &l in w.letters() {
                prod = prod.checked_mul(&args[l - 1])?;
            }
            acc = acc.checked_add(&prod.scale(&Scalar::Rational(c.clone())))?;
        }
        Ok(acc)
    }

    /// For each occurrence of x_slot in each word, the triple
    /// (coefficient, product left of it, product right of it) at `args`.
    ///
    /// The derivative of evaluation in direction h at slot `slot` is
    /// Σ c · L · h · R over these triples.
    pub fn slot_factors(&self, args: &[Matrix], slot: usize) -> Result<Vec<(Rational, Matrix, Matrix)>, EvalError> {
        let (n, field) = check_args(self.num_vars, args)?;
        let mut out = Vec::new();
        for (w, c) in &self.terms {
            let letters = w.letters();
            for (pos, _) in letters.iter().enumerate().filter(|(_, &l)| l == slot) {
                let mut left = Matrix::identity(n, field);
                for &l in &letters[..pos] {
                    left = left.checked_mul(&args[l - 1])?;
                }
                let mut right = Matrix::identity(n, field);
                for &l in &letters[pos + 1..] {
                    right = right.checked_mul(&args[l - 1])?;
                }
                out.push((c.clone(), left, right));
            }
        }
        Ok(out)
    }

    /// Canonical text in the same grammar `parse` reads.
    pub fn render(&self) -> String {
        self.to_string()
    }

    /// A random multilinear polynomial in m variables: each of the m! words
    /// gets an integer coefficient uniform in [−bound, bound]; never zero.
    pub fn random_multilinear<R: Rng + ?Sized>(rng: &mut R, m: usize, bound: i64) -> NcPolynomial {
        loop {
            let p = Self::from_terms(
                m,
                permutations(m)
                    .into_iter()
                    .map(|perm| (Word(perm), int(rng.gen_range(-bound..=bound)))),
            );
            if !p.is_zero() {
                return p;
            }
        }
    }
}

fn check_args(num_vars: usize, args: &[Matrix]) -> Result<(usize, FieldKind), EvalError> {
    if args.len() != num_vars {
        return Err(EvalError::ArgumentCount {
            expected: num_vars,
            got: args.len(),
        });
    }
    let Some(first) = args.first() else {
        return Err(EvalError::SizeMismatch);
    };
    let n = first.rows();
    let mut field = first.field();
    for a in args {
        if !a.is_square() || a.rows() != n {
            return Err(EvalError::SizeMismatch);
        }
        match (field, a.field()) {
            (x, y) if x == y => {}
            (x, y) => return Err(EvalError::Matrix(MatrixError::FieldMismatch(x, y))),
        }
        field = a.field();
    }
    Ok((n, field))
}

/// All permutations of 1..=m in lexicographic order.
pub fn permutations(m: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i + 1);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; m], &mut out);
    out
}

fn permutation_sign(perm: &[usize]) -> i64 {
    let inversions = (0..perm.len())
        .flat_map(|i| (i + 1..perm.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| perm[i] > perm[j])
        .count();
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// The standard polynomial s_k = Σ_σ sgn(σ) x_σ(1)⋯x_σ(k).
pub fn standard_polynomial(k: usize) -> NcPolynomial {
    NcPolynomial::from_terms(
        k,
        permutations(k).into_iter().map(|perm| {
            let s = permutation_sign(&perm);
            (Word(perm), int(s))
        }),
    )
}

fn commutator_poly(num_vars: usize, a: usize, b: usize) -> NcPolynomial {
    NcPolynomial::from_terms(num_vars, [(Word(vec![a, b]), int(1)), (Word(vec![b, a]), int(-1))])
}

pub const BUILTIN_NAMES: [&str; 5] = ["comm", "s2", "s3", "s4", "c4m"];

/// Catalog: `comm` = [x1,x2], `s2`..`s4` standard polynomials, and
/// `c4m` = [x1,x2][x3,x4] + [x3,x4][x1,x2], the multilinearization of [x,y]².
pub fn builtin(name: &str) -> Result<NcPolynomial, ParseError> {
    match name {
        "comm" => Ok(commutator_poly(2, 1, 2)),
        "s2" => Ok(standard_polynomial(2)),
        "s3" => Ok(standard_polynomial(3)),
        "s4" => Ok(standard_polynomial(4)),
        "c4m" => {
            let c12 = commutator_poly(4, 1, 2);
            let c34 = commutator_poly(4, 3, 4);
            Ok(c12.mul(&c34).add(&c34.mul(&c12)))
        }
        other => Err(ParseError::UnknownBuiltin(other.to_string())),
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            position: self.pos,
            message: message.into(),
        })
    }

    fn digits(&mut self) -> Option<&'a str> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| std::str::from_utf8(&self.src[start..self.pos]).unwrap())
    }

    fn coefficient(&mut self) -> Result<Rational, ParseError> {
        let num: num_bigint::BigInt = self.digits().unwrap().parse().unwrap();
        if self.peek() == Some(b'/') {
            self.pos += 1;
            self.skip_ws();
            let Some(den) = self.digits() else {
                return self.err("expected denominator");
            };
            let den: num_bigint::BigInt = den.parse().unwrap();
            if den.is_zero() {
                return self.err("zero denominator");
            }
            return Ok(Rational::new(num, den));
        }
        Ok(Rational::from_integer(num))
    }

    fn variable(&mut self, num_vars: Option<usize>) -> Result<usize, ParseError> {
        let start = self.pos;
        if self.peek() != Some(b'x') {
            return self.err("expected a variable `x<k>`");
        }
        self.pos += 1;
        let Some(d) = self.digits() else {
            return self.err("expected a variable index after `x`");
        };
        let index: usize = d.parse().map_err(|_| ParseError::Syntax {
            position: start,
            message: "variable index too large".into(),
        })?;
        if index == 0 {
            return Err(ParseError::Syntax {
                position: start,
                message: "variables are numbered from x1".into(),
            });
        }
        if let Some(m) = num_vars {
            if index > m {
                return Err(ParseError::VariableOutOfRange {
                    position: start,
                    index,
                    num_vars: m,
                });
            }
        }
        Ok(index)
    }

    fn term(&mut self, num_vars: Option<usize>) -> Result<(Rational, Vec<usize>), ParseError> {
        let mut coef = Rational::one();
        if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            coef = self.coefficient()?;
            if self.peek() != Some(b'*') {
                return self.err("expected `*` after coefficient");
            }
            self.pos += 1;
        }
        let mut letters = vec![self.variable(num_vars)?];
        while self.peek() == Some(b'*') {
            self.pos += 1;
            letters.push(self.variable(num_vars)?);
        }
        Ok((coef, letters))
    }

    fn poly(&mut self, num_vars: Option<usize>) -> Result<Vec<(Rational, Vec<usize>)>, ParseError> {
        let mut out = Vec::new();
        let mut sign = Rational::one();
        if self.peek() == Some(b'-') {
            self.pos += 1;
            sign = -sign;
        }
        loop {
            let (c, w) = self.term(num_vars)?;
            out.push((sign * c, w));
            match self.peek() {
                None => return Ok(out),
                Some(b'+') => sign = Rational::one(),
                Some(b'-') => sign = -Rational::one(),
                Some(_) => return self.err("expected `+`, `-` or end of input"),
            }
            self.pos += 1;
        }
    }
}

fn parse_terms(text: &str, num_vars: Option<usize>) -> Result<Vec<(Rational, Vec<usize>)>, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    if p.peek().is_none() {
        return p.err("empty polynomial");
    }
    p.poly(num_vars)
}

/// Parses `text` in m = `num_vars` variables; builtin names are accepted too.
pub fn parse(text: &str, num_vars: usize) -> Result<NcPolynomial, ParseError> {
    if let Ok(p) = builtin(text.trim()) {
        if p.num_vars() > num_vars {
            return Err(ParseError::VariableOutOfRange {
                position: 0,
                index: p.num_vars(),
                num_vars,
            });
        }
        return Ok(NcPolynomial::from_terms(num_vars, p.terms));
    }
    let terms = parse_terms(text, Some(num_vars))?;
    Ok(NcPolynomial::from_terms(
        num_vars,
        terms.into_iter().map(|(c, w)| (Word(w), c)),
    ))
}

/// Like [`parse`], with m taken as the largest variable index present.
pub fn parse_auto(text: &str) -> Result<NcPolynomial, ParseError> {
    if let Ok(p) = builtin(text.trim()) {
        return Ok(p);
    }
    let starts_like_name = text
        .trim()
        .chars()
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() && c != 'x');
    if starts_like_name {
        return Err(ParseError::UnknownBuiltin(text.trim().to_string()));
    }
    let terms = parse_terms(text, None)?;
    let m = terms.iter().flat_map(|(_, w)| w.iter().copied()).max().unwrap_or(0);
    Ok(NcPolynomial::from_terms(
        m,
        terms.into_iter().map(|(c, w)| (Word(w), c)),
    ))
}

impl fmt::Display for NcPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            // Not in the grammar; the zero polynomial renders as `0`.
            return f.write_str("0");
        }
        for (idx, (w, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            match (idx, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            if !mag.is_one() {
                write!(f, "{}*", render_rational(&mag))?;
            }
            let vars: Vec<String> = w.letters().iter().map(|l| format!("x{l}")).collect();
            f.write_str(&vars.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for NcPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NcPolynomial[m={}]({})", self.num_vars, self)
    }
}

impl Serialize for NcPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
