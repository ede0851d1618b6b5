//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Terms live in a `BTreeMap` keyed by [`Monomial`], whose ordering is
//! graded-lexicographic. Zero coefficients are never stored, so structural
//! equality of the maps is equality of polynomials and serialization is
//! byte-for-byte deterministic.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sum::pairwise_sum;

/// Exact rational scalar. Always stored reduced with a positive denominator.
pub type Rational = BigRational;

/// Shorthand for `num/den` as a [`Rational`].
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Shorthand for an integer [`Rational`].
pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Exponent vector of a monomial `x1^e1 ... xn^en`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    /// `x_i` (zero-based index).
    pub fn variable(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn dimension(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn times(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in `n` real variables with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactPolynomial {
    n: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl ExactPolynomial {
    /// The zero polynomial in `n` variables.
    pub fn zero(n: usize) -> Self {
        ExactPolynomial {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        let mut p = Self::zero(n);
        p.add_term(Monomial::one(n), c);
        p
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, Rational::one())
    }

    /// The coordinate function `x_i` (zero-based index).
    pub fn variable(n: usize, i: usize) -> Self {
        assert!(i < n, "variable index {i} out of range for dimension {n}");
        Self::monomial(Monomial::variable(n, i), Rational::one())
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut p = Self::zero(m.dimension());
        p.add_term(m, c);
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs; repeated
    /// monomials are summed.
    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut p = Self::zero(n);
        for (exps, c) in terms {
            if exps.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: exps.len(),
                });
            }
            p.add_term(Monomial(exps), c);
        }
        Ok(p)
    }

    /// `|x|^2 = x1^2 + ... + xn^2`.
    pub fn norm_squared(n: usize) -> Self {
        let mut p = Self::zero(n);
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = 2;
            p.add_term(Monomial(e), Rational::one());
        }
        p
    }

    /// `1 - |x|^2`.
    pub fn boundary_defect(n: usize) -> Self {
        &Self::one(n) - &Self::norm_squared(n)
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(Monomial::degree);
        match degrees.next() {
            None => true,
            Some(d) => degrees.all(|e| e == d),
        }
    }

    /// The sum of the terms of total degree `m`.
    pub fn homogeneous_part(&self, m: u32) -> Self {
        ExactPolynomial {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(mono, _)| mono.degree() == m)
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        debug_assert_eq!(m.dimension(), self.n);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_dimension(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_dimension(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_dimension(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_dimension(other)?;
        let mut out = Self::zero(self.n);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.times(mb), ca * cb);
            }
        }
        Ok(out)
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        ExactPolynomial {
            n: self.n,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.n);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Partial derivative with respect to `x_i` (zero-based).
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[i] -= 1;
            out.add_term(Monomial(exps), c * Rational::from_integer(BigInt::from(e)));
        }
        out
    }

    /// Second partial derivative `∂²/∂x_i²` in one pass.
    pub fn second_derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e < 2 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[i] -= 2;
            let factor = BigInt::from(e) * BigInt::from(e - 1);
            out.add_term(Monomial(exps), c * Rational::from_integer(factor));
        }
        out
    }

    /// Exact evaluation at a rational point.
    pub fn eval_exact(&self, x: &[Rational]) -> Result<Rational> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: x.len(),
            });
        }
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &e) in x.iter().zip(&m.0) {
                if e > 0 {
                    t *= num_traits::pow(xi.clone(), e as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Floating point evaluation with pairwise summation of the terms.
    pub fn eval_f64(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: x.len(),
            });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("non-finite coordinate".into()));
        }
        let values: Vec<f64> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut t = rational_to_f64(c);
                for (xi, &e) in x.iter().zip(&m.0) {
                    if e > 0 {
                        t *= xi.powi(e as i32);
                    }
                }
                t
            })
            .collect();
        Ok(pairwise_sum(&values))
    }

    /// Parses the JSON document format
    /// `{"n": int, "terms": [{"exps": [...], "num": int|string, "den": int|string}]}`.
    pub fn parse_json(text: &str) -> Result<Self> {
        let doc: PolynomialDoc =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::try_from(doc)
    }

    /// Canonical JSON text (graded-lex term order, reduced coefficients).
    pub fn to_json(&self) -> String {
        serde_json::to_string(&PolynomialDoc::from(self)).expect("polynomial serializes")
    }
}

pub fn rational_to_f64(c: &Rational) -> f64 {
    c.to_f64().unwrap_or_else(|| {
        // Huge numerator and denominator: scale both down first.
        let n = c.numer().to_f64().unwrap_or(f64::NAN);
        let d = c.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Exact conversion of a finite double to a rational.
pub fn rational_from_f64(v: f64) -> Result<Rational> {
    Rational::from_float(v).ok_or_else(|| Error::InvalidParameter(format!("non-finite value {v}")))
}

impl fmt::Display for ExactPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            if k == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { "-" } else { "+" })?;
            }
            let abs = c.abs();
            let is_const = m.degree() == 0;
            if !abs.is_one() || is_const {
                if abs.is_integer() {
                    write!(f, "{}", abs.numer())?;
                } else {
                    write!(f, "({}/{})", abs.numer(), abs.denom())?;
                }
            }
            let mut first = abs.is_one();
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                write!(f, "x{}", i + 1)?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&ExactPolynomial> for &ExactPolynomial {
            type Output = ExactPolynomial;
            /// Panics on a dimension mismatch; use the `checked_*` form to
            /// handle that case.
            fn $method(self, rhs: &ExactPolynomial) -> ExactPolynomial {
                self.$checked(rhs).expect("polynomial dimension mismatch")
            }
        }
        impl $tr<ExactPolynomial> for ExactPolynomial {
            type Output = ExactPolynomial;
            fn $method(self, rhs: ExactPolynomial) -> ExactPolynomial {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &ExactPolynomial {
    type Output = ExactPolynomial;
    fn neg(self) -> ExactPolynomial {
        self.scale(&-Rational::one())
    }
}

impl Neg for ExactPolynomial {
    type Output = ExactPolynomial;
    fn neg(self) -> ExactPolynomial {
        -&self
    }
}

/// Serialized form of an integer: JSON number when it fits in `i64`,
/// decimal string otherwise.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BigIntText {
    Small(i64),
    Text(String),
}

impl BigIntText {
    fn from_bigint(v: &BigInt) -> Self {
        match v.to_i64() {
            Some(s) => BigIntText::Small(s),
            None => BigIntText::Text(v.to_string()),
        }
    }

    fn to_bigint(&self) -> Result<BigInt> {
        match self {
            BigIntText::Small(v) => Ok(BigInt::from(*v)),
            BigIntText::Text(s) => s
                .trim()
                .parse::<BigInt>()
                .map_err(|_| Error::Parse(format!("not an integer: {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    pub exps: Vec<i64>,
    pub num: BigIntText,
    pub den: BigIntText,
}

/// Wire form of [`ExactPolynomial`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolynomialDoc {
    pub n: usize,
    pub terms: Vec<TermDoc>,
}

impl From<&ExactPolynomial> for PolynomialDoc {
    fn from(p: &ExactPolynomial) -> Self {
        PolynomialDoc {
            n: p.n,
            terms: p
                .terms
                .iter()
                .map(|(m, c)| TermDoc {
                    exps: m.0.iter().map(|&e| e as i64).collect(),
                    num: BigIntText::from_bigint(c.numer()),
                    den: BigIntText::from_bigint(c.denom()),
                })
                .collect(),
        }
    }
}

impl TryFrom<PolynomialDoc> for ExactPolynomial {
    type Error = Error;

    fn try_from(doc: PolynomialDoc) -> Result<Self> {
        if doc.n < 1 {
            return Err(Error::Parse("dimension must be positive".into()));
        }
        let mut p = ExactPolynomial::zero(doc.n);
        for t in doc.terms {
            if t.exps.len() != doc.n {
                return Err(Error::Parse(format!(
                    "term has {} exponents, expected {}",
                    t.exps.len(),
                    doc.n
                )));
            }
            let mut exps = Vec::with_capacity(doc.n);
            for e in t.exps {
                if e < 0 {
                    return Err(Error::Parse(format!("negative exponent {e}")));
                }
                exps.push(
                    u32::try_from(e)
                        .map_err(|_| Error::Parse(format!("exponent {e} too large")))?,
                );
            }
            let num = t.num.to_bigint()?;
            let den = t.den.to_bigint()?;
            if den.is_zero() {
                return Err(Error::Parse("zero denominator".into()));
            }
            if den.is_negative() {
                return Err(Error::Parse("denominator must be positive".into()));
            }
            p.add_term(Monomial(exps), Rational::new(num, den));
        }
        Ok(p)
    }
}

impl Serialize for ExactPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolynomialDoc::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExactPolynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = PolynomialDoc::deserialize(d)?;
        ExactPolynomial::try_from(doc).map_err(serde::de::Error::custom)
    }
}
