//! Pointwise evaluation of kernels and test functions, with second-order
//! jets for applying `Δ`, `R` and `L_θ` at a point.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::exactpoly::{rational_to_f64, ExactPolynomial, Rational};
use crate::quadrature::sphere_rule;
use crate::special::{c_theta, phi_theta, RadialProfile};
use crate::sum::pairwise_sum;

/// Points with `|x|` above this are treated as on the boundary.
pub const BOUNDARY_GUARD: f64 = 1.0 - 1e-12;

/// Points closer than this to the pole are rejected.
pub const POLE_GUARD: f64 = 1e-10;

/// Value, gradient and Hessian of a scalar field at a point.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet2 {
    pub value: f64,
    pub gradient: Vec<f64>,
    /// Row-major `n × n`.
    pub hessian: Vec<f64>,
}

impl Jet2 {
    pub fn constant(n: usize, c: f64) -> Self {
        Jet2 {
            value: c,
            gradient: vec![0.0; n],
            hessian: vec![0.0; n * n],
        }
    }

    /// The coordinate function `x_i` at a point whose `i`-th entry is `xi`.
    pub fn variable(n: usize, i: usize, xi: f64) -> Self {
        let mut j = Jet2::constant(n, xi);
        j.gradient[i] = 1.0;
        j
    }

    /// The coordinate jets `(x_1, …, x_n)` at `x`.
    pub fn coordinates(x: &[f64]) -> Vec<Jet2> {
        let n = x.len();
        (0..n).map(|i| Jet2::variable(n, i, x[i])).collect()
    }

    pub fn dimension(&self) -> usize {
        self.gradient.len()
    }

    pub fn hess(&self, i: usize, j: usize) -> f64 {
        self.hessian[i * self.dimension() + j]
    }

    pub fn laplacian(&self) -> f64 {
        let n = self.dimension();
        pairwise_sum(&(0..n).map(|i| self.hess(i, i)).collect::<Vec<_>>())
    }

    /// `x · ∇u`.
    pub fn radial(&self, x: &[f64]) -> f64 {
        pairwise_sum(
            &x.iter()
                .zip(&self.gradient)
                .map(|(a, b)| a * b)
                .collect::<Vec<_>>(),
        )
    }

    pub fn scale(&self, c: f64) -> Self {
        Jet2 {
            value: c * self.value,
            gradient: self.gradient.iter().map(|g| c * g).collect(),
            hessian: self.hessian.iter().map(|h| c * h).collect(),
        }
    }

    /// `φ ∘ u` given `φ(u), φ'(u), φ''(u)`.
    pub fn compose(&self, f: f64, df: f64, d2f: f64) -> Self {
        let n = self.dimension();
        let mut hessian = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                hessian[i * n + j] =
                    df * self.hessian[i * n + j] + d2f * self.gradient[i] * self.gradient[j];
            }
        }
        Jet2 {
            value: f,
            gradient: self.gradient.iter().map(|g| df * g).collect(),
            hessian,
        }
    }

    /// `u^c` for `u > 0` (any real `c`) or integer `c`.
    pub fn powf(&self, c: f64) -> Self {
        let u = self.value;
        if c == 0.0 {
            return Jet2::constant(self.dimension(), 1.0);
        }
        let f = u.powf(c);
        let df = if c == 1.0 { 1.0 } else { c * u.powf(c - 1.0) };
        let d2f = if c == 1.0 {
            0.0
        } else if c == 2.0 {
            2.0
        } else {
            c * (c - 1.0) * u.powf(c - 2.0)
        };
        self.compose(f, df, d2f)
    }

    pub fn powi(&self, k: u32) -> Self {
        let u = self.value;
        match k {
            0 => Jet2::constant(self.dimension(), 1.0),
            1 => self.clone(),
            _ => {
                let kf = k as f64;
                self.compose(
                    u.powi(k as i32),
                    kf * u.powi(k as i32 - 1),
                    kf * (kf - 1.0) * u.powi(k as i32 - 2),
                )
            }
        }
    }

    pub fn sqrt(&self) -> Self {
        self.powf(0.5)
    }

    pub fn recip(&self) -> Self {
        let u = self.value;
        self.compose(1.0 / u, -1.0 / (u * u), 2.0 / (u * u * u))
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        let n = self.dimension();
        (0..n).all(|i| {
            (0..i).all(|j| {
                let (a, b) = (self.hess(i, j), self.hess(j, i));
                (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
            })
        })
    }

    /// `Σ w_k u_k` with pairwise reduction per component.
    pub fn weighted_sum(jets: &[Jet2], weights: &[f64]) -> Self {
        let n = jets.first().map_or(0, Jet2::dimension);
        let collect = |f: &dyn Fn(&Jet2) -> f64| {
            pairwise_sum(
                &jets
                    .iter()
                    .zip(weights)
                    .map(|(j, w)| w * f(j))
                    .collect::<Vec<_>>(),
            )
        };
        Jet2 {
            value: collect(&|j| j.value),
            gradient: (0..n).map(|i| collect(&|j| j.gradient[i])).collect(),
            hessian: (0..n * n).map(|k| collect(&|j| j.hessian[k])).collect(),
        }
    }
}

impl Add for &Jet2 {
    type Output = Jet2;
    fn add(self, o: &Jet2) -> Jet2 {
        Jet2 {
            value: self.value + o.value,
            gradient: self
                .gradient
                .iter()
                .zip(&o.gradient)
                .map(|(a, b)| a + b)
                .collect(),
            hessian: self
                .hessian
                .iter()
                .zip(&o.hessian)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &Jet2 {
    type Output = Jet2;
    fn sub(self, o: &Jet2) -> Jet2 {
        self + &(-o)
    }
}

impl Neg for &Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        self.scale(-1.0)
    }
}

impl Mul for &Jet2 {
    type Output = Jet2;
    fn mul(self, o: &Jet2) -> Jet2 {
        let n = self.dimension();
        let mut hessian = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let k = i * n + j;
                hessian[k] = self.value * o.hessian[k]
                    + o.value * self.hessian[k]
                    + self.gradient[i] * o.gradient[j]
                    + o.gradient[i] * self.gradient[j];
            }
        }
        Jet2 {
            value: self.value * o.value,
            gradient: (0..n)
                .map(|i| self.value * o.gradient[i] + o.value * self.gradient[i])
                .collect(),
            hessian,
        }
    }
}

/// `|x|²` as a jet.
pub fn norm_squared_jet(x: &[f64]) -> Jet2 {
    let n = x.len();
    let mut j = Jet2::constant(n, x.iter().map(|v| v * v).sum());
    for i in 0..n {
        j.gradient[i] = 2.0 * x[i];
        j.hessian[i * n + i] = 2.0;
    }
    j
}

/// `1 - |x|²` as a jet.
pub fn boundary_defect_jet(x: &[f64]) -> Jet2 {
    let mut j = -&norm_squared_jet(x);
    j.value += 1.0;
    j
}

/// `|x - ζ|²` as a jet.
pub fn distance_squared_jet(x: &[f64], zeta: &[f64]) -> Jet2 {
    let d: Vec<f64> = x.iter().zip(zeta).map(|(a, b)| a - b).collect();
    let mut j = norm_squared_jet(&d);
    j.gradient = d.iter().map(|v| 2.0 * v).collect();
    j
}

fn check_point(x: &[f64], n: usize) -> Result<()> {
    if x.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: x.len(),
        });
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("non-finite coordinate".into()));
    }
    Ok(())
}

fn check_interior(x: &[f64]) -> Result<()> {
    let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if r > BOUNDARY_GUARD {
        return Err(Error::Domain(format!(
            "|x| = {r} is not inside the open ball"
        )));
    }
    Ok(())
}

fn check_away_from(x: &[f64], zeta: &[f64]) -> Result<()> {
    let d = x
        .iter()
        .zip(zeta)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    if d < POLE_GUARD {
        return Err(Error::Domain(format!(
            "|x - ζ| = {d:e} is at the kernel pole"
        )));
    }
    Ok(())
}

/// A scalar field on (part of) `R^n` whose second-order jet can be computed.
pub trait JetField {
    fn dimension(&self) -> usize;

    fn jet(&self, x: &[f64]) -> Result<Jet2>;

    fn value(&self, x: &[f64]) -> Result<f64> {
        Ok(self.jet(x)?.value)
    }
}

/// [`JetField::jet`] with the dimension checked.
pub fn jet_eval<F: JetField + ?Sized>(field: &F, x: &[f64]) -> Result<Jet2> {
    check_point(x, field.dimension())?;
    field.jet(x)
}

/// An exact polynomial evaluated with jet arithmetic.
pub struct PolynomialField(pub ExactPolynomial);

impl JetField for PolynomialField {
    fn dimension(&self) -> usize {
        self.0.dimension()
    }

    fn jet(&self, x: &[f64]) -> Result<Jet2> {
        let n = self.dimension();
        check_point(x, n)?;
        let coords = Jet2::coordinates(x);
        let mut terms = Vec::with_capacity(self.0.len());
        for (mono, c) in self.0.terms() {
            let mut acc = Jet2::constant(n, rational_to_f64(c));
            for (i, &e) in mono.exponents().iter().enumerate() {
                if e > 0 {
                    acc = &acc * &coords[i].powi(e);
                }
            }
            terms.push(acc);
        }
        if terms.is_empty() {
            return Ok(Jet2::constant(n, 0.0));
        }
        Ok(Jet2::weighted_sum(&terms, &vec![1.0; terms.len()]))
    }
}

/// Parameters of the θ-Poisson kernel
/// `P_θ(x, ζ) = C_θ (1-|x|²)^{1+2θ} / |x-ζ|^{n+2θ}`.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelSpec {
    theta: f64,
    pole: Vec<f64>,
    c_theta: f64,
}

impl KernelSpec {
    pub fn new(theta: f64, pole: Vec<f64>) -> Result<Self> {
        let n = pole.len();
        if n < 2 {
            return Err(Error::InvalidDimension(n));
        }
        let norm = pole.iter().map(|v| v * v).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-14 {
            return Err(Error::InvalidParameter(format!(
                "pole must be a unit vector, |ζ| = {norm}"
            )));
        }
        Ok(KernelSpec {
            theta,
            c_theta: c_theta(theta, n)?,
            pole,
        })
    }

    /// Pole at `e₁`.
    pub fn at_e1(theta: f64, n: usize) -> Result<Self> {
        let mut e1 = vec![0.0; n];
        e1[0] = 1.0;
        KernelSpec::new(theta, e1)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn pole(&self) -> &[f64] {
        &self.pole
    }

    pub fn constant(&self) -> f64 {
        self.c_theta
    }
}

impl JetField for KernelSpec {
    fn dimension(&self) -> usize {
        self.pole.len()
    }

    fn jet(&self, x: &[f64]) -> Result<Jet2> {
        check_point(x, self.dimension())?;
        check_interior(x)?;
        check_away_from(x, &self.pole)?;
        let n = self.dimension() as f64;
        let m = boundary_defect_jet(x).powf(1.0 + 2.0 * self.theta);
        let d = distance_squared_jet(x, &self.pole).powf(-(n + 2.0 * self.theta) / 2.0);
        Ok((&m * &d).scale(self.c_theta))
    }
}

/// `P_θ(x, ζ)`.
pub fn poisson_kernel(spec: &KernelSpec, x: &[f64]) -> Result<f64> {
    check_point(x, spec.dimension())?;
    check_interior(x)?;
    check_away_from(x, &spec.pole)?;
    let n = spec.dimension() as f64;
    let t = spec.theta;
    let m: f64 = 1.0 - x.iter().map(|v| v * v).sum::<f64>();
    let d2: f64 = x
        .iter()
        .zip(&spec.pole)
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    Ok(spec.c_theta * m.powf(1.0 + 2.0 * t) * d2.powf(-(n + 2.0 * t) / 2.0))
}

/// `Φ_θ(x) = ₂F₁(-θ, n/2-1-θ; n/2; |x|²)`.
pub struct PhiField {
    profile: RadialProfile,
}

impl PhiField {
    pub fn new(theta: &Rational, n: usize) -> Self {
        PhiField {
            profile: phi_theta(theta, n),
        }
    }

    pub fn profile(&self) -> &RadialProfile {
        &self.profile
    }
}

impl JetField for PhiField {
    fn dimension(&self) -> usize {
        self.profile.dimension()
    }

    fn jet(&self, x: &[f64]) -> Result<Jet2> {
        check_point(x, self.dimension())?;
        check_interior(x)?;
        let t = norm_squared_jet(x);
        let (f, df, d2f) = self.profile.eval_with_derivatives(t.value)?;
        Ok(t.compose(f, df, d2f))
    }
}

/// The test function `U_{j,N}(x) = (1-|x|²)^{N+j-1} / |x-e₁|^{n+2(j-1)}`,
/// with `U_{0,N} = (1-|x|²)^{N-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UField {
    pub j: u32,
    pub order: u32,
    pub n: usize,
}

impl UField {
    pub fn new(j: u32, order: u32, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDimension(n));
        }
        if order == 0 || j > order {
            return Err(Error::InvalidParameter(format!(
                "need 0 ≤ j ≤ N and N ≥ 1, got j = {j}, N = {order}"
            )));
        }
        Ok(UField { j, order, n })
    }
}

impl JetField for UField {
    fn dimension(&self) -> usize {
        self.n
    }

    fn jet(&self, x: &[f64]) -> Result<Jet2> {
        check_point(x, self.n)?;
        check_interior(x)?;
        let m = boundary_defect_jet(x);
        if self.j == 0 {
            return Ok(m.powi(self.order - 1));
        }
        let mut e1 = vec![0.0; self.n];
        e1[0] = 1.0;
        check_away_from(x, &e1)?;
        let d =
            distance_squared_jet(x, &e1).powf(-(self.n as f64 + 2.0 * (self.j as f64 - 1.0)) / 2.0);
        Ok(&m.powi(self.order + self.j - 1) * &d)
    }
}

/// `U_{j,N}(x)`.
pub fn u_jn(j: u32, order: u32, x: &[f64], n: usize) -> Result<f64> {
    UField::new(j, order, n)?.value(x)
}

/// `(1-|x|²)^λ f`, for real `λ`.
pub struct MPowerField<F> {
    pub lambda: f64,
    pub inner: F,
}

impl<F: JetField> JetField for MPowerField<F> {
    fn dimension(&self) -> usize {
        self.inner.dimension()
    }

    fn jet(&self, x: &[f64]) -> Result<Jet2> {
        check_point(x, self.dimension())?;
        let m = boundary_defect_jet(x);
        if m.value <= 0.0 && self.lambda.fract() != 0.0 {
            return Err(Error::Domain(
                "non-integer power of 1-|x|² outside the ball".into(),
            ));
        }
        let f = self.inner.jet(x)?;
        let mp = if self.lambda.fract() == 0.0 && self.lambda >= 0.0 {
            m.powi(self.lambda as u32)
        } else {
            m.powf(self.lambda)
        };
        Ok(&mp * &f)
    }
}

/// A field scaled by a constant.
pub struct Scaled<F> {
    pub factor: f64,
    pub inner: F,
}

impl<F: JetField> JetField for Scaled<F> {
    fn dimension(&self) -> usize {
        self.inner.dimension()
    }

    fn jet(&self, x: &[f64]) -> Result<Jet2> {
        Ok(self.inner.jet(x)?.scale(self.factor))
    }
}

/// The pieces of `L_θ u` at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LResidual {
    /// `(1-|x|²)Δu + 4θ x·∇u + 2θ(n-2-2θ)u`.
    pub residual: f64,
    /// `u(x)`.
    pub value: f64,
    /// Size of the terms before cancellation:
    /// `(1-|x|²)Σ|∂ᵢᵢu| + 4|θ|Σ|xᵢ∂ᵢu| + |2θ(n-2-2θ)u|`.
    pub scale: f64,
}

impl LResidual {
    /// `|L_θ u| / |u|`.
    pub fn relative(&self) -> f64 {
        self.residual.abs() / self.value.abs().max(f64::MIN_POSITIVE)
    }

    /// `|L_θ u|` relative to the size of its terms.
    pub fn relative_to_terms(&self) -> f64 {
        self.residual.abs() / self.scale.max(f64::MIN_POSITIVE)
    }
}

/// `L_θ` applied to a jet at `x`.
pub fn l_of_jet(theta: f64, jet: &Jet2, x: &[f64]) -> LResidual {
    let n = jet.dimension() as f64;
    let m = 1.0 - x.iter().map(|v| v * v).sum::<f64>();
    let terms = [
        m * jet.laplacian(),
        4.0 * theta * jet.radial(x),
        2.0 * theta * (n - 2.0 - 2.0 * theta) * jet.value,
    ];
    LResidual {
        residual: pairwise_sum(&terms),
        value: jet.value,
        scale: m
            * (0..jet.dimension())
                .map(|i| jet.hess(i, i).abs())
                .sum::<f64>()
            + 4.0
                * theta.abs()
                * x.iter()
                    .zip(&jet.gradient)
                    .map(|(a, b)| (a * b).abs())
                    .sum::<f64>()
            + terms[2].abs(),
    }
}

/// `L_θ[field](x)` with its size information.
pub fn l_residual_detail<F: JetField + ?Sized>(
    theta: f64,
    field: &F,
    x: &[f64],
) -> Result<LResidual> {
    let jet = jet_eval(field, x)?;
    Ok(l_of_jet(theta, &jet, x))
}

/// `L_θ[field](x)`.
#[allow(non_snake_case)]
pub fn L_residual_at<F: JetField + ?Sized>(theta: f64, field: &F, x: &[f64]) -> Result<f64> {
    Ok(l_residual_detail(theta, field, x)?.residual)
}

/// `P_θ[f](x) = ∫_S P_θ(x, ζ) f(ζ) dσ(ζ)` as a field, by sphere quadrature.
pub struct ThetaPoissonIntegral<B> {
    theta: f64,
    n: usize,
    boundary: B,
    nodes: Vec<Vec<f64>>,
    weights: Vec<f64>,
    c_theta: f64,
}

impl<B: Fn(&[f64]) -> f64> ThetaPoissonIntegral<B> {
    pub fn new(theta: f64, n: usize, boundary: B, sphere_level: usize) -> Result<Self> {
        if !(theta > -0.5) {
            return Err(Error::InvalidParameter(format!(
                "θ-Poisson integrals need θ > -1/2, got {theta}"
            )));
        }
        let rule = sphere_rule(n, sphere_level)?;
        let values: Vec<f64> = rule.nodes.iter().map(|z| boundary(z)).collect();
        let weights = rule
            .weights
            .iter()
            .zip(&values)
            .map(|(w, v)| w * v)
            .collect();
        Ok(ThetaPoissonIntegral {
            theta,
            n,
            boundary,
            nodes: rule.nodes,
            weights,
            c_theta: c_theta(theta, n)?,
        })
    }

    pub fn boundary_value(&self, zeta: &[f64]) -> f64 {
        (self.boundary)(zeta)
    }
}

impl<B: Fn(&[f64]) -> f64> JetField for ThetaPoissonIntegral<B> {
    fn dimension(&self) -> usize {
        self.n
    }

    fn jet(&self, x: &[f64]) -> Result<Jet2> {
        check_point(x, self.n)?;
        check_interior(x)?;
        let n = self.n as f64;
        let t = self.theta;
        let m = boundary_defect_jet(x).powf(1.0 + 2.0 * t);
        let mut jets = Vec::with_capacity(self.nodes.len());
        for z in &self.nodes {
            check_away_from(x, z)?;
            jets.push(distance_squared_jet(x, z).powf(-(n + 2.0 * t) / 2.0));
        }
        let integral = Jet2::weighted_sum(&jets, &self.weights);
        Ok((&m * &integral).scale(self.c_theta))
    }
}

/// `P_θ[f](x)`.
pub fn theta_poisson_integral<B: Fn(&[f64]) -> f64>(
    theta: f64,
    boundary: B,
    x: &[f64],
    sphere_level: usize,
) -> Result<f64> {
    ThetaPoissonIntegral::new(theta, x.len(), boundary, sphere_level)?.value(x)
}

/// Pointwise check that `U_{j,N}` is `N`-harmonic.
///
/// With `λ = N - 1`, `v = 1` for `j = 0`, and `λ = N - j`,
/// `v = P_{j-1}(·, e₁)/C_{j-1}` otherwise, `U_{j,N} = M^λ v` and
/// `L_{N-λ-1} v = 0`. Each link
///
/// ```text
/// L_{N-k}[M^{λ-k+1} v] = 4(λ-k+1)(λ-2N+k) M^{λ-k} v,   k = 1, …, min(N, λ+1),
/// ```
///
/// is evaluated at `x`; their composition gives `L_0 ⋯ L_{N-1} U_{j,N} = 0`,
/// which is `(1-|x|²)^N Δ^N U_{j,N} = 0`. Returns the largest link residual
/// relative to the size of its terms.
pub fn u_chain_residual(j: u32, order: u32, n: usize, x: &[f64]) -> Result<f64> {
    let field = UField::new(j, order, n)?;
    check_point(x, n)?;
    check_interior(x)?;
    let lambda = if field.j == 0 {
        order - 1
    } else {
        order - field.j
    } as i64;
    let base: Box<dyn JetField> = if j == 0 {
        Box::new(PolynomialField(ExactPolynomial::one(n)))
    } else {
        let spec = KernelSpec::at_e1(j as f64 - 1.0, n)?;
        let c = spec.constant();
        Box::new(Scaled {
            factor: 1.0 / c,
            inner: spec,
        })
    };
    let v = base.jet(x)?;
    let m = boundary_defect_jet(x);
    let mpow = |k: i64| {
        if k <= 0 {
            Jet2::constant(n, 1.0)
        } else {
            m.powi(k as u32)
        }
    };
    let nn = order as i64;
    let mut worst = 0.0f64;
    for k in 1..=nn.min(lambda + 1) {
        let theta = (nn - k) as f64;
        let lhs = l_of_jet(theta, &(&mpow(lambda - k + 1) * &v), x);
        let coeff = 4.0 * (lambda - k + 1) as f64 * (lambda - 2 * nn + k) as f64;
        let rhs = if lambda - k >= 0 {
            coeff * (&mpow(lambda - k) * &v).value
        } else {
            0.0
        };
        let scale = lhs.scale + rhs.abs();
        let r = (lhs.residual - rhs).abs() / scale.max(f64::MIN_POSITIVE);
        worst = worst.max(r);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::{int, rat};
    use crate::operators::{apply_l, m_power, ThetaParam};
    use approx::assert_relative_eq;

    fn x(n: usize, i: usize) -> ExactPolynomial {
        ExactPolynomial::variable(n, i)
    }

    #[test]
    fn norm_squared_jet_basics() {
        let p = [0.3, -0.2, 0.5];
        let j = norm_squared_jet(&p);
        assert_relative_eq!(j.value, 0.38, max_relative = 1e-15);
        assert_eq!(j.gradient, vec![0.6, -0.4, 1.0]);
        assert_eq!(j.hessian, vec![2.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 2.0]);
        let c = PolynomialField(ExactPolynomial::constant(3, int(7)))
            .jet(&p)
            .unwrap();
        assert_eq!(c.value, 7.0);
        assert!(c.gradient.iter().chain(&c.hessian).all(|v| *v == 0.0));
    }

    #[test]
    fn polynomial_jet_matches_exact_derivatives() {
        let n = 3;
        let u = &(&x(n, 0).pow(3) * &x(n, 1))
            - &(&x(n, 2).pow(2) * &ExactPolynomial::constant(n, rat(5, 2)))
            + ExactPolynomial::boundary_defect(n).pow(2);
        let p = [0.21, -0.4, 0.33];
        let jet = PolynomialField(u.clone()).jet(&p).unwrap();
        assert_relative_eq!(jet.value, u.eval_f64(&p).unwrap(), max_relative = 1e-13);
        for i in 0..n {
            let gi = u.derivative(i).eval_f64(&p).unwrap();
            assert!((jet.gradient[i] - gi).abs() < 1e-12 * gi.abs().max(1.0));
            for k in 0..n {
                let hik = u.derivative(i).derivative(k).eval_f64(&p).unwrap();
                assert!((jet.hess(i, k) - hik).abs() < 1e-12 * hik.abs().max(1.0));
            }
        }
        assert!(jet.is_symmetric(1e-14));
    }

    #[test]
    fn zero_polynomial_jet_has_full_dimension() {
        let jet = jet_eval(&PolynomialField(ExactPolynomial::zero(3)), &[0.1, 0.2, 0.3]).unwrap();
        assert_eq!(jet.gradient, vec![0.0; 3]);
        assert_eq!(jet.hessian, vec![0.0; 9]);
    }

    #[test]
    fn l_residual_matches_exact_operator() {
        let n = 3;
        let u = &(&x(n, 0) * &x(n, 1).pow(2)) + &x(n, 2).pow(4);
        let p = [0.1, 0.5, -0.3];
        for theta in [rat(0, 1), rat(1, 2), rat(3, 2), int(-1)] {
            let exact = apply_l(&ThetaParam::new(theta.clone()), &u)
                .eval_f64(&p)
                .unwrap();
            let numeric =
                L_residual_at(rational_to_f64(&theta), &PolynomialField(u.clone()), &p).unwrap();
            assert!(
                (exact - numeric).abs() < 1e-10,
                "{theta}: {exact} vs {numeric}"
            );
        }
    }

    #[test]
    fn poisson_kernel_examples() {
        let k0 = KernelSpec::at_e1(0.0, 3).unwrap();
        assert_relative_eq!(k0.constant(), 1.0, max_relative = 1e-15);
        let p = [0.2, 0.1, -0.3];
        let m: f64 = 1.0 - p.iter().map(|v| v * v).sum::<f64>();
        let d: f64 = ((p[0] - 1.0f64).powi(2) + p[1] * p[1] + p[2] * p[2]).sqrt();
        assert_relative_eq!(
            poisson_kernel(&k0, &p).unwrap(),
            m / d.powi(3),
            max_relative = 1e-14
        );
        let k1 = KernelSpec::at_e1(1.0, 3).unwrap();
        assert_relative_eq!(k1.constant(), 0.75, max_relative = 1e-14);
        assert_relative_eq!(
            poisson_kernel(&k1, &[0.5, 0.0, 0.0]).unwrap(),
            10.125,
            max_relative = 1e-14
        );
        let k = KernelSpec::new(0.7, vec![0.6, 0.8]).unwrap();
        assert_relative_eq!(
            poisson_kernel(&k, &[0.0, 0.0]).unwrap(),
            k.constant(),
            max_relative = 1e-15
        );
        assert!(matches!(
            poisson_kernel(&k1, &[1.0, 0.0, 0.0]),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            poisson_kernel(&k1, &[0.0, 1.0, 0.0]),
            Err(Error::Domain(_))
        ));
        assert!(KernelSpec::new(0.0, vec![1.0, 1.0]).is_err());
        assert!(KernelSpec::at_e1(-1.0, 3).is_err());
    }

    #[test]
    fn kernel_is_annihilated() {
        for n in [2, 3, 4] {
            for theta in [0.0, 0.5, 1.0, 2.0, -0.25] {
                let k = KernelSpec::at_e1(theta, n).unwrap();
                let mut p = vec![0.0; n];
                p[0] = 0.4;
                p[1] = -0.35;
                let r = l_residual_detail(theta, &k, &p).unwrap();
                assert!(r.relative() < 1e-10, "n={n} θ={theta}: {r:?}");
            }
        }
    }

    #[test]
    fn phi_field_is_annihilated() {
        for theta in [rat(1, 2), rat(3, 2), int(2), rat(-1, 4)] {
            let f = PhiField::new(&theta, 3);
            let r = l_residual_detail(rational_to_f64(&theta), &f, &[0.3, 0.4, -0.5]).unwrap();
            assert!(r.relative_to_terms() < 1e-10, "θ={theta}: {r:?}");
        }
    }

    #[test]
    fn u_values() {
        assert_eq!(u_jn(0, 3, &[0.0, 0.0, 0.0], 3).unwrap(), 1.0);
        assert_eq!(u_jn(1, 1, &[0.0, 0.0, 0.0], 3).unwrap(), 1.0);
        assert!(u_jn(3, 2, &[0.0, 0.0, 0.0], 3).is_err());
        // U_{j,N} = M^{N-j} P_{j-1} / C_{j-1}
        let p = [0.3, 0.2, -0.1];
        let k = KernelSpec::at_e1(1.0, 3).unwrap();
        let via_kernel = (1.0 - 0.14f64).powi(1) * poisson_kernel(&k, &p).unwrap() / k.constant();
        assert_relative_eq!(u_jn(2, 3, &p, 3).unwrap(), via_kernel, max_relative = 1e-14);
    }

    #[test]
    fn u_chain_vanishes() {
        for (j, order) in [(1, 2), (0, 3), (2, 2), (1, 3), (2, 4)] {
            let r = u_chain_residual(j, order, 3, &[0.2, -0.3, 0.4]).unwrap();
            assert!(r < 1e-12, "j={j} N={order}: {r}");
        }
    }

    #[test]
    fn m_power_paths_agree() {
        // 1 + 2θ = 3 for θ = 1
        let n = 3;
        let u = &x(n, 0) * &x(n, 2) + ExactPolynomial::one(n);
        let exact = m_power(&u, 3);
        let numeric = MPowerField {
            lambda: 3.0,
            inner: PolynomialField(u),
        };
        let p = [0.1, -0.6, 0.2];
        let a = exact.eval_f64(&p).unwrap();
        let b = numeric.value(&p).unwrap();
        assert!((a - b).abs() < 1e-12 * a.abs().max(1.0));
    }

    #[test]
    fn poisson_integrals() {
        let one = |_: &[f64]| 1.0;
        for p in [[0.0, 0.0, 0.0], [0.3, -0.2, 0.1], [0.0, 0.5, 0.0]] {
            let v = theta_poisson_integral(0.0, one, &p, 24).unwrap();
            assert!((v - 1.0).abs() < 1e-8, "{p:?}: {v}");
        }
        for theta in [0.5, 1.0, 2.5] {
            let v = theta_poisson_integral(theta, one, &[0.0, 0.0, 0.0], 8).unwrap();
            assert_relative_eq!(v, c_theta(theta, 3).unwrap(), max_relative = 1e-12);
        }
        assert!(theta_poisson_integral(-0.5, one, &[0.0, 0.0, 0.0], 8).is_err());
        let field = ThetaPoissonIntegral::new(1.0, 3, |z: &[f64]| z[0], 24).unwrap();
        let r = l_residual_detail(1.0, &field, &[0.2, 0.1, -0.3]).unwrap();
        assert!(r.residual.abs() < 1e-6, "{r:?}");
    }
}
