//! Exact differential operators on polynomials.
//!
//! `Δ` is the Laplacian, `R = x·∇` the radial derivative, `M^j` multiplication
//! by `(1-|x|²)^j`, and
//!
//! ```text
//! L_θ u = (1-|x|²) Δu + 4θ R[u] + 2θ(n-2-2θ) u.
//! ```
//!
//! The `*_residual` functions expand both sides of the operator identities
//! satisfied by these operators and return their difference, which must be
//! the zero polynomial for every input.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exactpoly::{int, ExactPolynomial, Rational};
use crate::special::pochhammer_exact;

/// The real parameter of `L_θ`, kept exact.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ThetaParam(pub Rational);

impl ThetaParam {
    pub fn new(value: Rational) -> Self {
        ThetaParam(value)
    }

    pub fn integer(v: i64) -> Self {
        ThetaParam(int(v))
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }

    /// `θ + k`.
    pub fn shifted(&self, k: i64) -> Self {
        ThetaParam(&self.0 + int(k))
    }

    pub fn to_f64(&self) -> f64 {
        crate::exactpoly::rational_to_f64(&self.0)
    }
}

impl From<i64> for ThetaParam {
    fn from(v: i64) -> Self {
        ThetaParam::integer(v)
    }
}

impl From<Rational> for ThetaParam {
    fn from(v: Rational) -> Self {
        ThetaParam(v)
    }
}

impl fmt::Display for ThetaParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn laplacian(u: &ExactPolynomial) -> ExactPolynomial {
    let mut out = ExactPolynomial::zero(u.dimension());
    for i in 0..u.dimension() {
        out = &out + &u.second_derivative(i);
    }
    out
}

/// `Δ^k u`.
pub fn laplacian_power(u: &ExactPolynomial, k: u32) -> ExactPolynomial {
    let mut out = u.clone();
    for _ in 0..k {
        if out.is_zero() {
            break;
        }
        out = laplacian(&out);
    }
    out
}

/// `R[u] = x·∇u`. Each monomial is an eigenfunction with its total degree as
/// eigenvalue, so this is a coefficient rescaling.
pub fn radial(u: &ExactPolynomial) -> ExactPolynomial {
    let terms = u
        .terms()
        .map(|(m, c)| (m.exponents().to_vec(), c * int(m.degree() as i64)));
    ExactPolynomial::from_terms(u.dimension(), terms).expect("same dimension")
}

/// `M^j u = (1-|x|²)^j u`.
pub fn m_power(u: &ExactPolynomial, j: u32) -> ExactPolynomial {
    if j == 0 || u.is_zero() {
        return u.clone();
    }
    &ExactPolynomial::boundary_defect(u.dimension()).pow(j) * u
}

/// [`m_power`] for a signed exponent; only `j >= 0` is polynomial.
pub fn try_m_power(u: &ExactPolynomial, j: i64) -> Result<ExactPolynomial> {
    let j = u32::try_from(j).map_err(|_| {
        Error::InvalidParameter(format!("M^{j} is not polynomial for negative exponents"))
    })?;
    Ok(m_power(u, j))
}

/// `L_θ u`.
pub fn apply_l(theta: &ThetaParam, u: &ExactPolynomial) -> ExactPolynomial {
    let n = int(u.dimension() as i64);
    let t = theta.value();
    let zeroth = int(2) * t * (n - int(2) - int(2) * t);
    let mut out = m_power(&laplacian(u), 1);
    if !t.is_zero() {
        out = &out + &radial(u).scale(&(int(4) * t));
    }
    &out + &u.scale(&zeroth)
}

/// `L_{θ_0} L_{θ_1} ⋯ L_{θ_{k-1}} u`, rightmost factor applied first.
pub fn apply_l_chain(thetas: &[ThetaParam], u: &ExactPolynomial) -> ExactPolynomial {
    thetas
        .iter()
        .rev()
        .fold(u.clone(), |acc, t| apply_l(t, &acc))
}

/// One factor of an [`OperatorWord`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OperatorAtom {
    Laplacian,
    Radial,
    M(u32),
    L(Rational),
    Scalar(Rational),
}

impl OperatorAtom {
    pub fn apply(&self, u: &ExactPolynomial) -> ExactPolynomial {
        match self {
            OperatorAtom::Laplacian => laplacian(u),
            OperatorAtom::Radial => radial(u),
            OperatorAtom::M(j) => m_power(u, *j),
            OperatorAtom::L(t) => apply_l(&ThetaParam(t.clone()), u),
            OperatorAtom::Scalar(c) => u.scale(c),
        }
    }
}

impl fmt::Display for OperatorAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OperatorAtom::Laplacian => write!(f, "Δ"),
            OperatorAtom::Radial => write!(f, "R"),
            OperatorAtom::M(j) => write!(f, "M^{j}"),
            OperatorAtom::L(t) => write!(f, "L_{t}"),
            OperatorAtom::Scalar(c) => write!(f, "({c})"),
        }
    }
}

/// A composition of operators, written left to right and applied right to
/// left.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorWord(Vec<OperatorAtom>);

impl OperatorWord {
    pub fn new(atoms: Vec<OperatorAtom>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidParameter("empty operator word".into()));
        }
        Ok(OperatorWord(atoms))
    }

    pub fn atoms(&self) -> &[OperatorAtom] {
        &self.0
    }

    pub fn apply(&self, u: &ExactPolynomial) -> ExactPolynomial {
        self.0.iter().rev().fold(u.clone(), |acc, a| a.apply(&acc))
    }

    /// `L_0 L_1 ⋯ L_{N-1}`.
    pub fn l_product(order: u32) -> Self {
        OperatorWord((0..order as i64).map(|k| OperatorAtom::L(int(k))).collect())
    }
}

impl fmt::Display for OperatorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

/// `L_θ M^λ u - M^λ L_{θ-λ} u - 4λ(λ-1-2θ) M^{λ-1} u`.
pub fn correspondence_residual(
    theta: &ThetaParam,
    lambda: u32,
    u: &ExactPolynomial,
) -> Result<ExactPolynomial> {
    if lambda == 0 {
        return Err(Error::Precondition("λ must be at least 1".into()));
    }
    let l = int(lambda as i64);
    let lhs = apply_l(theta, &m_power(u, lambda));
    let shifted = theta.shifted(-(lambda as i64));
    let first = m_power(&apply_l(&shifted, u), lambda);
    let coeff = int(4) * &l * (&l - int(1) - int(2) * theta.value());
    let second = m_power(u, lambda - 1).scale(&coeff);
    Ok(&(&lhs - &first) - &second)
}

/// `L_θ M^{1+2θ} u - M^{1+2θ} L_{-θ-1} u`, defined when `1+2θ` is a
/// non-negative integer.
pub fn reflection_residual(theta: &ThetaParam, u: &ExactPolynomial) -> Result<ExactPolynomial> {
    let power = int(1) + int(2) * theta.value();
    if !power.is_integer() || power.is_negative() {
        return Err(Error::InvalidParameter(format!(
            "1+2θ = {power} is not a non-negative integer"
        )));
    }
    let power = u32::try_from(power.to_integer())
        .map_err(|_| Error::InvalidParameter("exponent too large".into()))?;
    let mirrored = ThetaParam(-theta.value() - int(1));
    let lhs = apply_l(theta, &m_power(u, power));
    let rhs = m_power(&apply_l(&mirrored, u), power);
    Ok(&lhs - &rhs)
}

/// `Δ^j L_θ u - L_{θ-j} Δ^j u`.
pub fn commutation_residual(
    theta: &ThetaParam,
    j: u32,
    u: &ExactPolynomial,
) -> Result<ExactPolynomial> {
    if j == 0 {
        return Err(Error::Precondition("j must be at least 1".into()));
    }
    let lhs = laplacian_power(&apply_l(theta, u), j);
    let rhs = apply_l(&theta.shifted(-(j as i64)), &laplacian_power(u, j));
    Ok(&lhs - &rhs)
}

/// `L_0 L_1 ⋯ L_{N-1} u - (1-|x|²)^N Δ^N u`.
pub fn factorization_residual(order: u32, u: &ExactPolynomial) -> Result<ExactPolynomial> {
    if order == 0 {
        return Err(Error::Precondition("N must be at least 1".into()));
    }
    let lhs = OperatorWord::l_product(order).apply(u);
    let rhs = m_power(&laplacian_power(u, order), order);
    Ok(&lhs - &rhs)
}

/// `4^k (j-k+1)_k (j-2N+1)_k`, the scalar of the iterated identity.
pub fn iterated_coefficient(order: u32, j: u32, k: u32) -> Rational {
    let (n, j, k) = (order as i64, j as i64, k as i64);
    let four_k = Rational::from_integer(BigInt::from(4).pow(k as u32));
    four_k
        * pochhammer_exact(&int(j - k + 1), k as u32)
        * pochhammer_exact(&int(j - 2 * n + 1), k as u32)
}

/// `L_{N-k} ⋯ L_{N-1} M^j u - 4^k (j-k+1)_k (j-2N+1)_k M^{j-k} u` for `u`
/// annihilated by `L_{N-j-1}`. When `k > j` the right side is zero.
pub fn iterated_identity_residual(
    order: u32,
    j: u32,
    k: u32,
    u: &ExactPolynomial,
) -> Result<ExactPolynomial> {
    if order == 0 || j >= order || k == 0 || k > order {
        return Err(Error::Precondition(format!(
            "need 0 <= j < N and 1 <= k <= N, got N={order}, j={j}, k={k}"
        )));
    }
    let annihilator = ThetaParam::integer(order as i64 - j as i64 - 1);
    if !apply_l(&annihilator, u).is_zero() {
        return Err(Error::Precondition(format!(
            "input is not annihilated by L_{annihilator}"
        )));
    }
    let thetas: Vec<ThetaParam> = (order - k..order)
        .map(|t| ThetaParam::integer(t as i64))
        .collect();
    let lhs = apply_l_chain(&thetas, &m_power(u, j));
    let coeff = iterated_coefficient(order, j, k);
    let rhs = if coeff.is_zero() {
        ExactPolynomial::zero(u.dimension())
    } else {
        m_power(u, j - k).scale(&coeff)
    };
    Ok(&lhs - &rhs)
}
