//! Gamma, Pochhammer symbols and the Gauss hypergeometric function on the
//! real segment `[-1, 1]`, together with the closed forms built from them:
//! the radial solutions `Φ_θ`, the kernel constant `C_θ`, and the ball
//! integral `I(a, b)`.

use std::f64::consts::PI;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactpoly::{int, rat, rational_to_f64, ExactPolynomial, Rational};

/// Lanczos parameter `g`.
const LANCZOS_G: f64 = 7.0;

/// Lanczos coefficients for `g = 7`.
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Iteration cap of the hypergeometric series.
pub const HYP2F1_MAX_TERMS: usize = 100_000;

/// Closest approach to `z = 1` allowed for a non-terminating series.
pub const HYP2F1_BOUNDARY_GAP: f64 = 1e-8;

/// Default relative tolerance for the hypergeometric series.
pub const HYP2F1_TOL: f64 = 1e-16;

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// `sin(πx)` with exact zeros at the integers.
fn sin_pi(x: f64) -> f64 {
    let r = x.rem_euclid(2.0);
    if r == 0.0 || r == 1.0 {
        return 0.0;
    }
    if r == 0.5 {
        return 1.0;
    }
    if r == 1.5 {
        return -1.0;
    }
    let (r, sign) = if r > 1.0 { (r - 1.0, -1.0) } else { (r, 1.0) };
    sign * (PI * r.min(1.0 - r)).sin()
}

/// `Γ(x)` by the Lanczos approximation, with the reflection formula below
/// `1/2`.
pub fn gamma(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::InvalidParameter("gamma of NaN".into()));
    }
    if is_nonpositive_integer(x) {
        return Err(Error::Pole {
            function: "gamma",
            at: x,
        });
    }
    if x < 0.5 {
        return Ok(PI / (sin_pi(x) * gamma(1.0 - x)?));
    }
    if x == x.floor() && x <= 23.0 {
        // Exact factorials where the double grid represents them.
        let mut acc = 1.0;
        let mut k = 2.0;
        while k < x {
            acc *= k;
            k += 1.0;
        }
        return Ok(acc);
    }
    let x = x - 1.0;
    let mut series = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        series += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    // Split the power so that large arguments do not overflow early.
    let half = t.powf(0.5 * (x + 0.5));
    Ok((2.0 * PI).sqrt() * half * (-t).exp() * half * series)
}

/// `1/Γ(x)`, which is entire: zero at the poles of `Γ`.
pub fn recip_gamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return 0.0;
    }
    match gamma(x) {
        Ok(g) => 1.0 / g,
        Err(_) => 0.0,
    }
}

/// Ascending factorial `(a)_k = a(a+1)⋯(a+k-1)`, `(a)_0 = 1`.
pub fn pochhammer(a: f64, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (a + i as f64))
}

/// Exact ascending factorial.
pub fn pochhammer_exact(a: &Rational, k: u32) -> Rational {
    let mut acc = Rational::one();
    let mut factor = a.clone();
    for _ in 0..k {
        if factor.is_zero() {
            return Rational::zero();
        }
        acc *= &factor;
        factor += Rational::one();
    }
    acc
}

/// Parameters of `₂F₁(a, b; c; z)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Hyp2F1Params {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub z: f64,
}

impl Hyp2F1Params {
    pub fn new(a: f64, b: f64, c: f64, z: f64) -> Self {
        Hyp2F1Params { a, b, c, z }
    }

    /// Index of the last nonzero term when the series is a polynomial.
    pub fn terminating_degree(&self) -> Option<u32> {
        [self.a, self.b]
            .into_iter()
            .filter(|&v| is_nonpositive_integer(v))
            .map(|v| (-v) as u32)
            .min()
    }

    fn validate(&self) -> Result<()> {
        let Hyp2F1Params { a, b, c, z } = *self;
        if [a, b, c, z].iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "non-finite hypergeometric parameter".into(),
            ));
        }
        if is_nonpositive_integer(c) {
            let ok = self
                .terminating_degree()
                .map(|m| (m as f64) <= -c)
                .unwrap_or(false);
            if !ok {
                return Err(Error::InvalidParameter(format!(
                    "c = {c} is a nonpositive integer and the series does not terminate first"
                )));
            }
        }
        Ok(())
    }
}

/// Partial sums of the defining series, stopped once
/// `|term| < tol·|sum|` or at termination.
pub fn hyp2f1_series(p: &Hyp2F1Params, tol: f64, max_terms: usize) -> Result<f64> {
    p.validate()?;
    let Hyp2F1Params { a, b, c, z } = *p;
    let terminating = p.terminating_degree();
    let mut sum = 1.0;
    let mut term = 1.0;
    let mut small_streak = 0;
    for k in 0..max_terms {
        if let Some(m) = terminating {
            if k as u32 >= m {
                return Ok(sum);
            }
        }
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * z;
        sum += term;
        if terminating.is_none() {
            // Two consecutive small terms guard against a transient dip.
            if term.abs() <= tol * sum.abs() {
                small_streak += 1;
                if small_streak >= 2 {
                    return Ok(sum);
                }
            } else {
                small_streak = 0;
            }
        }
    }
    Err(Error::NonConvergence {
        iterations: max_terms,
    })
}

/// `₂F₁(a, b; c; z)` for real `z` in `[-1, 1]`.
///
/// Polynomial cases are summed exactly to their last term. Otherwise the
/// series is used on `[-1/2, 1/2]`, the Pfaff transformation maps
/// `[-1, -1/2)` into `[1/3, 1/2]`, and on `(1/2, 1)` the `z ↦ 1-z`
/// connection formula is used when `c-a-b` is not an integer. `z = 1` is
/// delegated to [`gauss_value`].
pub fn hyp2f1(p: &Hyp2F1Params, tol: f64) -> Result<f64> {
    p.validate()?;
    let Hyp2F1Params { a, b, c, z } = *p;
    if z == 0.0 {
        return Ok(1.0);
    }
    if p.terminating_degree().is_some() {
        return hyp2f1_series(p, tol, HYP2F1_MAX_TERMS);
    }
    if z.abs() > 1.0 {
        return Err(Error::InvalidParameter(format!(
            "|z| = {} exceeds 1; no analytic continuation",
            z.abs()
        )));
    }
    if z == 1.0 {
        return gauss_value(a, b, c);
    }
    if z > 1.0 - HYP2F1_BOUNDARY_GAP {
        return Err(Error::InvalidParameter(format!(
            "z = {z} is closer to 1 than {HYP2F1_BOUNDARY_GAP}"
        )));
    }
    if z < -0.5 {
        let w = z / (z - 1.0);
        let inner = hyp2f1(&Hyp2F1Params::new(a, c - b, c, w), tol)?;
        return Ok((1.0 - z).powf(-a) * inner);
    }
    if z <= 0.5 {
        return hyp2f1_series(p, tol, HYP2F1_MAX_TERMS);
    }
    let s = c - a - b;
    if (s - s.round()).abs() < 1e-9 {
        return hyp2f1_series(p, tol, HYP2F1_MAX_TERMS);
    }
    let w = 1.0 - z;
    let gc = gamma(c)?;
    let first = gc * gamma(s)? * recip_gamma(c - a) * recip_gamma(c - b);
    let second = gc * gamma(-s)? * recip_gamma(a) * recip_gamma(b);
    let mut value = 0.0;
    if first != 0.0 {
        value += first * hyp2f1(&Hyp2F1Params::new(a, b, 1.0 - s, w), tol)?;
    }
    if second != 0.0 {
        value += second * w.powf(s) * hyp2f1(&Hyp2F1Params::new(c - a, c - b, 1.0 + s, w), tol)?;
    }
    Ok(value)
}

/// Gauss's value `₂F₁(a, b; c; 1) = Γ(c)Γ(c-a-b) / (Γ(c-a)Γ(c-b))`.
pub fn gauss_value(a: f64, b: f64, c: f64) -> Result<f64> {
    let s = c - a - b;
    if s <= 0.0 {
        return Err(Error::Domain(format!(
            "₂F₁ diverges at z = 1 when c - a - b = {s} <= 0"
        )));
    }
    if is_nonpositive_integer(c) {
        return Err(Error::Pole {
            function: "gamma",
            at: c,
        });
    }
    Ok(gamma(c)? * gamma(s)? * recip_gamma(c - a) * recip_gamma(c - b))
}

/// An integral value that may be `+∞`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum IntegralValue {
    Finite(f64),
    Divergent,
}

impl IntegralValue {
    pub fn is_finite(&self) -> bool {
        matches!(self, IntegralValue::Finite(_))
    }

    pub fn finite(&self) -> Option<f64> {
        match self {
            IntegralValue::Finite(v) => Some(*v),
            IntegralValue::Divergent => None,
        }
    }
}

/// Closed form of `I(a, b) = ∫_B (1-|x|²)^a / |x-e₁|^{n+a+b} dV`, finite
/// exactly when `a > -1` and `b < 0`.
pub fn i_closed_form(a: f64, b: f64, n: usize) -> Result<IntegralValue> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidParameter("non-finite exponent".into()));
    }
    if a <= -1.0 || b >= 0.0 {
        return Ok(IntegralValue::Divergent);
    }
    let nf = n as f64;
    let value = PI.powf(nf / 2.0) * gamma(1.0 + a)? * gamma(-b)?
        / (gamma((nf + a - b) / 2.0)? * gamma((2.0 + a - b) / 2.0)?);
    Ok(IntegralValue::Finite(value))
}

/// Normalization constant `C_θ = Γ(n/2+θ)Γ(1+θ) / (Γ(n/2)Γ(1+2θ))` of the
/// θ-Poisson kernel.
pub fn c_theta(theta: f64, n: usize) -> Result<f64> {
    let h = n as f64 / 2.0;
    Ok(gamma(h + theta)? * gamma(1.0 + theta)? / (gamma(h)? * gamma(1.0 + 2.0 * theta)?))
}

/// The radial profile `t ↦ ₂F₁(-θ, n/2-1-θ; n/2; t)`, so that
/// `Φ_θ(x) = profile(|x|²)` solves `L_θ[u] = 0` on the ball.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialProfile {
    theta: Rational,
    n: usize,
    a: Rational,
    b: Rational,
    c: Rational,
    exact: Option<Vec<Rational>>,
}

/// Builds `Φ_θ` in dimension `n`.
pub fn phi_theta(theta: &Rational, n: usize) -> RadialProfile {
    let a = -theta.clone();
    let c = rat(n as i64, 2);
    let b = &c - int(1) - theta;
    let degree = [&a, &b]
        .into_iter()
        .filter(|v| v.is_integer() && !v.is_positive())
        .map(|v| (-v.to_integer()).try_into().unwrap_or(u32::MAX))
        .min();
    let exact = degree.map(|m: u32| {
        let mut coeffs = Vec::with_capacity(m as usize + 1);
        let mut term = Rational::one();
        coeffs.push(term.clone());
        for k in 0..m {
            let kr = int(k as i64);
            term = term * (&a + &kr) * (&b + &kr) / ((&c + &kr) * (&kr + int(1)));
            coeffs.push(term.clone());
        }
        coeffs
    });
    RadialProfile {
        theta: theta.clone(),
        n,
        a,
        b,
        c,
        exact,
    }
}

impl RadialProfile {
    pub fn theta(&self) -> &Rational {
        &self.theta
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    /// `(a, b, c)` as doubles.
    pub fn parameters(&self) -> (f64, f64, f64) {
        (
            rational_to_f64(&self.a),
            rational_to_f64(&self.b),
            rational_to_f64(&self.c),
        )
    }

    /// `Φ_θ` is bounded on the ball exactly when `θ > -1/2`.
    pub fn is_bounded(&self) -> bool {
        self.theta > rat(-1, 2)
    }

    /// Coefficients in `t` when the series terminates.
    pub fn exact_coefficients(&self) -> Option<&[Rational]> {
        self.exact.as_deref()
    }

    /// The terminating profile as a polynomial in `x` via `t = |x|²`.
    pub fn exact_polynomial(&self) -> Option<ExactPolynomial> {
        let coeffs = self.exact.as_ref()?;
        let t = ExactPolynomial::norm_squared(self.n);
        let mut acc = ExactPolynomial::zero(self.n);
        // Horner in t.
        for c in coeffs.iter().rev() {
            acc = &(&acc * &t) + &ExactPolynomial::constant(self.n, c.clone());
        }
        Some(acc)
    }

    /// Series coefficient of `t^k` as a double.
    pub fn coefficient(&self, k: u32) -> f64 {
        self.coefficients(k as usize + 1)[k as usize]
    }

    /// The first `count` series coefficients, by the ratio recurrence.
    pub fn coefficients(&self, count: usize) -> Vec<f64> {
        let (a, b, c) = self.parameters();
        let mut out = Vec::with_capacity(count);
        let mut term = 1.0;
        for k in 0..count {
            out.push(term);
            let kf = k as f64;
            term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0));
        }
        out
    }

    /// Numeric value at `t = |x|²`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        let (a, b, c) = self.parameters();
        hyp2f1(&Hyp2F1Params::new(a, b, c, t), HYP2F1_TOL)
    }

    /// Value of the exact polynomial form, when there is one.
    pub fn eval_exact_form(&self, t: f64) -> Option<f64> {
        let coeffs = self.exact.as_ref()?;
        Some(
            coeffs
                .iter()
                .rev()
                .fold(0.0, |acc, c| acc * t + rational_to_f64(c)),
        )
    }

    /// `(f(t), f'(t), f''(t))`, using `d/dt ₂F₁(a,b;c;t) = (ab/c) ₂F₁(a+1,b+1;c+1;t)`.
    pub fn eval_with_derivatives(&self, t: f64) -> Result<(f64, f64, f64)> {
        let (a, b, c) = self.parameters();
        let f = hyp2f1(&Hyp2F1Params::new(a, b, c, t), HYP2F1_TOL)?;
        let d1_scale = a * b / c;
        let d1 = if d1_scale == 0.0 {
            0.0
        } else {
            d1_scale * hyp2f1(&Hyp2F1Params::new(a + 1.0, b + 1.0, c + 1.0, t), HYP2F1_TOL)?
        };
        let d2_scale = d1_scale * (a + 1.0) * (b + 1.0) / (c + 1.0);
        let d2 = if d2_scale == 0.0 {
            0.0
        } else {
            d2_scale * hyp2f1(&Hyp2F1Params::new(a + 2.0, b + 2.0, c + 2.0, t), HYP2F1_TOL)?
        };
        Ok((f, d1, d2))
    }
}
