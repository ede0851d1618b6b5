//! Quadrature on the unit sphere and ball.
//!
//! One-dimensional Gauss rules come from the Golub–Welsch eigenvalue method.
//! Sphere rules are products over hyperspherical angles: each polar angle
//! with weight `sin^m φ` becomes a Gauss–Jacobi rule in `u = cos φ`, and the
//! last angle uses the trapezoid rule. Ball rules multiply a radial
//! Gauss–Jacobi rule by a sphere rule.
//!
//! Integrals that are singular at the boundary point `e₁` use a separate
//! scheme: the radial variable is split dyadically toward `|x| = 1` and the
//! polar angle measured from `e₁` is split dyadically toward `0`.

use std::f64::consts::PI;
use std::io::Write;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::{gamma, i_closed_form, IntegralValue};
use crate::sum::{pairwise_sum, weighted_sum};

/// Smallest and largest dimensions with product rules.
pub const MIN_DIMENSION: usize = 2;
pub const MAX_DIMENSION: usize = 6;

/// Default depth of the dyadic angular subdivision toward `e₁`.
pub const DEFAULT_ANGULAR_DEPTH: u32 = 12;

/// Gauss nodes per dyadic piece.
const PIECE_NODES: usize = 20;

/// Weight function of a one-dimensional Gauss rule on `[-1, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GaussKind {
    Legendre,
    /// Weight `(1-x)^alpha (1+x)^beta`.
    Jacobi {
        alpha: f64,
        beta: f64,
    },
}

/// A one-dimensional rule `∫ f w ≈ Σ w_i f(x_i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Rule1D {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule1D {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        let values: Vec<f64> = self.nodes.iter().map(|&x| f(x)).collect();
        weighted_sum(&self.weights, &values)
    }

    /// The same rule for an affine image `[a, b]` of `[-1, 1]`, for a weight
    /// function that is not rescaled (only `dx` is).
    pub fn mapped(&self, a: f64, b: f64) -> Rule1D {
        let half = 0.5 * (b - a);
        Rule1D {
            nodes: self.nodes.iter().map(|x| a + half * (x + 1.0)).collect(),
            weights: self.weights.iter().map(|w| w * half).collect(),
        }
    }
}

/// `k`-point Gauss rule on `[-1, 1]`, exact for polynomials of degree
/// `2k - 1` against the weight of `kind`.
pub fn gauss_rule(kind: GaussKind, k: usize) -> Result<Rule1D> {
    let (alpha, beta) = match kind {
        GaussKind::Legendre => (0.0, 0.0),
        GaussKind::Jacobi { alpha, beta } => (alpha, beta),
    };
    if k == 0 {
        return Err(Error::InvalidParameter(
            "a Gauss rule needs at least one node".into(),
        ));
    }
    if !(alpha > -1.0 && beta > -1.0) || !alpha.is_finite() || !beta.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "Jacobi exponents must exceed -1, got ({alpha}, {beta})"
        )));
    }
    let ab = alpha + beta;
    let mut jacobi = DMatrix::<f64>::zeros(k, k);
    for i in 0..k {
        let fi = i as f64;
        let diag = if i == 0 {
            (beta - alpha) / (ab + 2.0)
        } else {
            (beta * beta - alpha * alpha) / ((2.0 * fi + ab) * (2.0 * fi + ab + 2.0))
        };
        jacobi[(i, i)] = diag;
        if i + 1 < k {
            let m = fi + 1.0;
            let s = 2.0 * m + ab;
            let off2 = if i == 0 {
                4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab))
            } else {
                4.0 * m * (m + alpha) * (m + beta) * (m + ab) / (s * s * (s + 1.0) * (s - 1.0))
            };
            let off = off2.sqrt();
            jacobi[(i, i + 1)] = off;
            jacobi[(i + 1, i)] = off;
        }
    }
    let mu0 = 2f64.powf(ab + 1.0) * gamma(alpha + 1.0)? * gamma(beta + 1.0)? / gamma(ab + 2.0)?;
    let eig = SymmetricEigen::new(jacobi);
    let mut pairs: Vec<(f64, f64)> = (0..k)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], mu0 * v0 * v0)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(Rule1D {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
    })
}

fn check_dimension(n: usize) -> Result<()> {
    if !(MIN_DIMENSION..=MAX_DIMENSION).contains(&n) {
        return Err(Error::InvalidParameter(format!(
            "product rules support 2 ≤ n ≤ 6, got n = {n}"
        )));
    }
    Ok(())
}

/// Surface area `ω_{n-1} = 2π^{n/2}/Γ(n/2)` of the unit sphere in `R^n`.
pub fn sphere_area(n: usize) -> f64 {
    2.0 * PI.powf(n as f64 / 2.0) / gamma(n as f64 / 2.0).expect("n ≥ 1")
}

/// Lebesgue volume `π^{n/2}/Γ(n/2+1)` of the unit ball.
pub fn ball_volume(n: usize) -> f64 {
    PI.powf(n as f64 / 2.0) / gamma(n as f64 / 2.0 + 1.0).expect("n ≥ 1")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DomainKind {
    Sphere,
    Ball,
}

/// Radial factor of a ball rule: `r^{n-1}` alone or with `(1-r)^a`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RadialKind {
    Legendre,
    Jacobi { a: f64 },
}

/// Nodes and weights on `S` (normalized, total mass 1) or `B` (Lebesgue).
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule {
    pub n: usize,
    pub kind: DomainKind,
    pub nodes: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
    /// `None` for sphere rules.
    pub radial: Option<RadialKind>,
    pub radial_nodes: usize,
    pub angular_level: usize,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        pairwise_sum(&self.weights)
    }

    pub fn integrate<F: Fn(&[f64]) -> f64>(&self, f: F) -> f64 {
        let values: Vec<f64> = self.nodes.iter().map(|x| f(x)).collect();
        weighted_sum(&self.weights, &values)
    }

    pub fn try_integrate<F: Fn(&[f64]) -> Result<f64>>(&self, f: F) -> Result<f64> {
        let values = self
            .nodes
            .iter()
            .map(|x| f(x))
            .collect::<Result<Vec<f64>>>()?;
        Ok(weighted_sum(&self.weights, &values))
    }

    /// CSV with columns `x1, …, xn, weight`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let err = |e: csv::Error| Error::Evaluation(e.to_string());
        let mut header: Vec<String> = (1..=self.n).map(|i| format!("x{i}")).collect();
        header.push("weight".into());
        w.write_record(&header).map_err(err)?;
        for (x, wt) in self.nodes.iter().zip(&self.weights) {
            let mut rec: Vec<String> = x.iter().map(|v| format!("{v:e}")).collect();
            rec.push(format!("{wt:e}"));
            w.write_record(&rec).map_err(err)?;
        }
        w.flush().map_err(|e| Error::Evaluation(e.to_string()))
    }
}

/// Points and normalized weights on `S^{n-1} ⊂ R^n`.
fn sphere_points(n: usize, level: usize) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
    if n == 2 {
        let m = 2 * level;
        let nodes = (0..m)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / m as f64;
                vec![t.cos(), t.sin()]
            })
            .collect();
        return Ok((nodes, vec![1.0 / m as f64; m]));
    }
    // ζ = (u, √(1-u²) η) with u = cos φ weighted by sin^{n-2} φ.
    let e = (n as f64 - 3.0) / 2.0;
    let polar = gauss_rule(GaussKind::Jacobi { alpha: e, beta: e }, level)?;
    let mass = pairwise_sum(&polar.weights);
    let (inner, inner_w) = sphere_points(n - 1, level)?;
    let mut nodes = Vec::with_capacity(polar.len() * inner.len());
    let mut weights = Vec::with_capacity(nodes.capacity());
    for (u, wu) in polar.nodes.iter().zip(&polar.weights) {
        let s = (1.0 - u * u).sqrt();
        for (eta, we) in inner.iter().zip(&inner_w) {
            let mut z = Vec::with_capacity(n);
            z.push(*u);
            z.extend(eta.iter().map(|c| s * c));
            nodes.push(z);
            weights.push(wu / mass * we);
        }
    }
    Ok((nodes, weights))
}

/// Product rule on the unit sphere with `level` Gauss nodes per polar angle
/// and `2·level` azimuthal nodes, normalized to total mass 1.
pub fn sphere_rule(n: usize, level: usize) -> Result<QuadratureRule> {
    check_dimension(n)?;
    if level == 0 {
        return Err(Error::InvalidParameter("level must be at least 1".into()));
    }
    let (nodes, weights) = sphere_points(n, level)?;
    Ok(QuadratureRule {
        n,
        kind: DomainKind::Sphere,
        nodes,
        weights,
        radial: None,
        radial_nodes: 0,
        angular_level: level,
    })
}

/// Radial rule on `[0, 1]` for the weight `r^{n-1}(1-r)^a`.
pub fn radial_rule(n: usize, radial: RadialKind, k: usize) -> Result<Rule1D> {
    let a = match radial {
        RadialKind::Legendre => 0.0,
        RadialKind::Jacobi { a } => a,
    };
    let beta = n as f64 - 1.0;
    let base = gauss_rule(GaussKind::Jacobi { alpha: a, beta }, k)?;
    // r = (1+x)/2, 1-r = (1-x)/2, dr = dx/2
    let scale = 2f64.powf(-(a + beta + 1.0));
    Ok(Rule1D {
        nodes: base.nodes.iter().map(|x| 0.5 * (1.0 + x)).collect(),
        weights: base.weights.iter().map(|w| w * scale).collect(),
    })
}

/// Ball rule in polar coordinates. With [`RadialKind::Jacobi`] the factor
/// `(1-|x|)^a` is part of the weights, so the rule computes
/// `∫_B f(x)(1-|x|)^a dV` from values of `f`.
pub fn ball_rule(
    n: usize,
    radial: RadialKind,
    radial_nodes: usize,
    sphere_level: usize,
) -> Result<QuadratureRule> {
    check_dimension(n)?;
    let r_rule = radial_rule(n, radial, radial_nodes)?;
    let s_rule = sphere_rule(n, sphere_level)?;
    let area = sphere_area(n);
    let mut nodes = Vec::with_capacity(r_rule.len() * s_rule.len());
    let mut weights = Vec::with_capacity(nodes.capacity());
    for (r, wr) in r_rule.nodes.iter().zip(&r_rule.weights) {
        for (z, wz) in s_rule.nodes.iter().zip(&s_rule.weights) {
            nodes.push(z.iter().map(|c| r * c).collect());
            weights.push(area * wr * wz);
        }
    }
    Ok(QuadratureRule {
        n,
        kind: DomainKind::Ball,
        nodes,
        weights,
        radial: Some(radial),
        radial_nodes,
        angular_level: sphere_level,
    })
}

/// `M_p(f, r) = (∫_S |f(rζ)|^p dσ(ζ))^{1/p}`.
pub fn radial_mean<F: Fn(&[f64]) -> Result<f64>>(
    f: F,
    n: usize,
    p: f64,
    r: f64,
    sphere_level: usize,
) -> Result<f64> {
    if !(p > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "p must be positive, got {p}"
        )));
    }
    if !(0.0..1.0).contains(&r) {
        return Err(Error::InvalidParameter(format!(
            "radius must lie in [0, 1), got {r}"
        )));
    }
    let rule = sphere_rule(n, sphere_level)?;
    let mean = rule.try_integrate(|z| {
        let x: Vec<f64> = z.iter().map(|c| r * c).collect();
        Ok(f(&x)?.abs().powf(p))
    })?;
    Ok(mean.powf(1.0 / p))
}

/// `∫_0^π sin^{n-2} φ dφ`, the normalizer of the polar-angle marginal of `σ`.
fn polar_normalizer(n: usize) -> f64 {
    if n == 2 {
        return PI;
    }
    PI.sqrt() * gamma((n as f64 - 1.0) / 2.0).expect("n ≥ 3")
        / gamma(n as f64 / 2.0).expect("n ≥ 2")
}

/// Dyadic pieces `[2^{-k-1}, 2^{-k}]·scale`, `k < depth`, then the final
/// piece `[0, 2^{-depth}]·scale`, each carrying a Gauss–Legendre rule.
fn dyadic_rule(scale: f64, depth: u32, base: &Rule1D) -> Rule1D {
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    let mut hi = scale;
    for _ in 0..depth {
        let lo = 0.5 * hi;
        let piece = base.mapped(lo, hi);
        nodes.extend(piece.nodes);
        weights.extend(piece.weights);
        hi = lo;
    }
    let piece = base.mapped(0.0, hi);
    nodes.extend(piece.nodes);
    weights.extend(piece.weights);
    Rule1D { nodes, weights }
}

/// Polar-angle rule about `e₁` on `[0, π]`, refined dyadically toward `0`,
/// with weights `sin^{n-2}φ / Z` so that a function of `ζ₁` integrates
/// against the normalized surface measure.
fn refined_polar_rule(n: usize, depth: u32, base: &Rule1D) -> Rule1D {
    let raw = dyadic_rule(PI, depth, base);
    let z = polar_normalizer(n);
    Rule1D {
        weights: raw
            .nodes
            .iter()
            .zip(&raw.weights)
            .map(|(phi, w)| w * phi.sin().powi(n as i32 - 2) / z)
            .collect(),
        nodes: raw.nodes,
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "tolerance must lie in (0, 1), got {tol}"
        )));
    }
    Ok(())
}

/// Numerical value of `I(a, b) = ∫_B (1-|x|²)^a / |x-e₁|^{n+a+b} dV(x)`.
///
/// The integrand depends on `x` through `r = |x|` and the angle `φ` between
/// `x` and `e₁`, with `|x-e₁|² = (1-r)² + 4r sin²(φ/2)`. Both variables are
/// split dyadically toward the singular point, with the radial depth chosen
/// from the boundary exponent so that the omitted tail is below `tol`.
pub fn i_numeric(a: f64, b: f64, n: usize, tol: f64) -> Result<f64> {
    check_dimension(n)?;
    check_tol(tol)?;
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidParameter("non-finite exponent".into()));
    }
    if a <= -1.0 || b >= 0.0 {
        return Err(Error::Domain(format!(
            "I(a, b) diverges for a = {a}, b = {b} (needs a > -1 and b < 0)"
        )));
    }
    let base = gauss_rule(GaussKind::Legendre, PIECE_NODES)?;
    let sigma = n as f64 + a + b;
    // near |x| = 1 the angular average behaves like (1-r)^{min(0, -1-a-b)}
    let edge = a.min(-1.0 - b);
    let digits = (1.0 / tol).log2() + 8.0;
    let radial_depth = ((digits / (1.0 + edge)).ceil() as u32).clamp(8, 200);
    let s_rule = dyadic_rule(1.0, radial_depth, &base);

    let mut values = Vec::with_capacity(s_rule.len());
    for &s in &s_rule.nodes {
        let r = 1.0 - s;
        let depth = DEFAULT_ANGULAR_DEPTH.max((PI / s).log2().ceil() as u32 + 6);
        let polar = refined_polar_rule(n, depth, &base);
        let inner = polar.integrate(|phi| {
            let h = (0.5 * phi).sin();
            (s * s + 4.0 * r * h * h).powf(-0.5 * sigma)
        });
        let weight = r.powi(n as i32 - 1) * (s * (2.0 - s)).powf(a);
        values.push(weight * inner);
    }
    Ok(sphere_area(n) * weighted_sum(&s_rule.weights, &values))
}

/// Closed form and quadrature side by side.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegralComparison {
    pub a: f64,
    pub b: f64,
    pub n: usize,
    pub tol: f64,
    pub closed_form: IntegralValue,
    pub numeric: Option<f64>,
    pub relative_error: Option<f64>,
    pub within_tolerance: Option<bool>,
}

pub fn compare_integral(a: f64, b: f64, n: usize, tol: f64) -> Result<IntegralComparison> {
    let closed = i_closed_form(a, b, n)?;
    let (numeric, rel, ok) = match closed {
        IntegralValue::Finite(c) => {
            let v = i_numeric(a, b, n, tol)?;
            let rel = ((v - c) / c).abs();
            (Some(v), Some(rel), Some(rel <= tol))
        }
        IntegralValue::Divergent => (None, None, None),
    };
    Ok(IntegralComparison {
        a,
        b,
        n,
        tol,
        closed_form: closed,
        numeric,
        relative_error: rel,
        within_tolerance: ok,
    })
}

/// A rule on the sphere with polar axis `e₁`, refined toward `e₁`.
struct PoleRefinedSphere {
    nodes: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

impl PoleRefinedSphere {
    fn new(n: usize, depth: u32, transverse_level: usize, base: &Rule1D) -> Result<Self> {
        let polar = refined_polar_rule(n, depth, base);
        let (inner, inner_w) = if n == 2 {
            (vec![vec![1.0], vec![-1.0]], vec![0.5, 0.5])
        } else {
            sphere_points(n - 1, transverse_level)?
        };
        let mut nodes = Vec::with_capacity(polar.len() * inner.len());
        let mut weights = Vec::with_capacity(nodes.capacity());
        for (phi, wp) in polar.nodes.iter().zip(&polar.weights) {
            let (s, c) = phi.sin_cos();
            for (eta, we) in inner.iter().zip(&inner_w) {
                let mut z = Vec::with_capacity(n);
                z.push(c);
                z.extend(eta.iter().map(|e| s * e));
                nodes.push(z);
                weights.push(wp * we);
            }
        }
        Ok(PoleRefinedSphere { nodes, weights })
    }
}

/// Masses `∫_{r_k ≤ |x| ≤ r_{k+1}} |f|^p (1-|x|²)^α dV` of the shells
/// `r_k = 1 - 2^{-k}`, for `k < count`.
fn shell_masses<F: Fn(&[f64]) -> Result<f64>>(
    f: &F,
    n: usize,
    p: f64,
    alpha: f64,
    count: u32,
    angular_depth: u32,
    transverse_level: usize,
) -> Result<Vec<f64>> {
    let base = gauss_rule(GaussKind::Legendre, PIECE_NODES)?;
    let area = sphere_area(n);
    let mut masses = Vec::with_capacity(count as usize);
    let mut x = vec![0.0; n];
    for k in 0..count {
        let hi = 0.5f64.powi(k as i32);
        let radial = base.mapped(0.5 * hi, hi);
        let sphere = PoleRefinedSphere::new(n, angular_depth.max(k + 6), transverse_level, &base)?;
        let mut values = Vec::with_capacity(radial.len());
        for &s in &radial.nodes {
            let r = 1.0 - s;
            let mut shell = Vec::with_capacity(sphere.nodes.len());
            for z in &sphere.nodes {
                for (xi, zi) in x.iter_mut().zip(z) {
                    *xi = r * zi;
                }
                shell.push(f(&x)?.abs().powf(p));
            }
            let avg = weighted_sum(&sphere.weights, &shell);
            values.push(area * r.powi(n as i32 - 1) * (s * (2.0 - s)).powf(alpha) * avg);
        }
        masses.push(weighted_sum(&radial.weights, &values));
    }
    Ok(masses)
}

/// Outcome of the finiteness test on truncated norms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Convergent,
    Divergent,
    Inconclusive,
}

/// Truncation levels used when none are given: `r_m = 1 - 2^{-m}` for
/// `m = 4, 11, 18, 25, 32`.
pub const DEFAULT_NORM_LEVELS: [u32; 5] = [4, 11, 18, 25, 32];

/// Input of [`weighted_norm`]: `‖f‖^p_{p,α}` truncated to `|x| ≤ 1 - 2^{-m}`
/// for each level `m`.
pub struct WeightedNormRequest<'a> {
    pub integrand: &'a dyn Fn(&[f64]) -> Result<f64>,
    pub n: usize,
    pub p: f64,
    pub alpha: f64,
    pub levels: Vec<u32>,
    pub angular_depth: u32,
    pub transverse_level: usize,
}

impl<'a> WeightedNormRequest<'a> {
    pub fn new(integrand: &'a dyn Fn(&[f64]) -> Result<f64>, n: usize, p: f64, alpha: f64) -> Self {
        WeightedNormRequest {
            integrand,
            n,
            p,
            alpha,
            levels: DEFAULT_NORM_LEVELS.to_vec(),
            angular_depth: DEFAULT_ANGULAR_DEPTH,
            transverse_level: 8,
        }
    }

    pub fn with_levels(mut self, levels: Vec<u32>) -> Self {
        self.levels = levels;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightedNormReport {
    pub levels: Vec<u32>,
    pub radii: Vec<f64>,
    pub truncated: Vec<f64>,
    pub verdict: Verdict,
}

/// Divergent if each of the last three steps grows the truncated norm by a
/// factor of at least 1.2; convergent if each of the last two increments is
/// at least 4 times smaller than the one before; inconclusive otherwise.
pub fn finiteness_verdict(truncated: &[f64]) -> Verdict {
    let m = truncated.len();
    if m >= 4
        && truncated[m - 4..]
            .windows(2)
            .all(|w| w[1] >= 1.2 * w[0] && w[0] > 0.0)
    {
        return Verdict::Divergent;
    }
    if m >= 4 {
        let inc: Vec<f64> = truncated[m - 4..].windows(2).map(|w| w[1] - w[0]).collect();
        if inc.windows(2).all(|d| d[1].abs() * 4.0 <= d[0].abs()) {
            return Verdict::Convergent;
        }
    }
    Verdict::Inconclusive
}

pub fn weighted_norm(req: &WeightedNormRequest<'_>) -> Result<WeightedNormReport> {
    check_dimension(req.n)?;
    if !(req.p > 0.0 && req.p.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "p must be positive, got {}",
            req.p
        )));
    }
    if !req.alpha.is_finite() {
        return Err(Error::InvalidParameter("α must be finite".into()));
    }
    if req.levels.is_empty() || req.levels.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter(
            "levels must be non-empty and strictly increasing".into(),
        ));
    }
    let top = *req.levels.last().expect("non-empty");
    if top > 48 {
        return Err(Error::InvalidParameter(
            "levels above 48 exceed double precision".into(),
        ));
    }
    let masses = shell_masses(
        &req.integrand,
        req.n,
        req.p,
        req.alpha,
        top,
        req.angular_depth,
        req.transverse_level,
    )?;
    let truncated: Vec<f64> = req
        .levels
        .iter()
        .map(|&m| pairwise_sum(&masses[..m as usize]))
        .collect();
    Ok(WeightedNormReport {
        radii: req
            .levels
            .iter()
            .map(|&m| 1.0 - 0.5f64.powi(m as i32))
            .collect(),
        verdict: finiteness_verdict(&truncated),
        levels: req.levels.clone(),
        truncated,
    })
}

/// A heuristic estimate of the critical weight exponent of `f`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BetaEstimate {
    pub beta: f64,
    /// Fitted exponent `γ` in `|f|^p ≈ (1-|x|)^γ` on spheres.
    pub slope: f64,
    /// Root mean square residual of the log-log fit.
    pub residual: f64,
}

/// Fits `log(A_m / (r_{m+1}-r_m))` against `log(1-r_m)` over the shells
/// `m ∈ [first, last)` and returns `β ≈ -1 - slope`.
pub fn estimate_beta_p<F: Fn(&[f64]) -> Result<f64>>(
    f: F,
    n: usize,
    p: f64,
    first: u32,
    last: u32,
) -> Result<BetaEstimate> {
    check_dimension(n)?;
    if !(p > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "p must be positive, got {p}"
        )));
    }
    if last < first + 2 || last > 48 {
        return Err(Error::InvalidParameter(
            "need at least two shells below level 48".into(),
        ));
    }
    let masses = shell_masses(&f, n, p, 0.0, last, DEFAULT_ANGULAR_DEPTH, 8)?;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for m in first..last {
        let mass = masses[m as usize];
        if !(mass > 0.0) {
            continue;
        }
        let s = 0.5f64.powi(m as i32);
        xs.push(s.ln());
        ys.push((mass / (0.5 * s)).ln());
    }
    if xs.len() < 2 {
        return Err(Error::Evaluation(
            "shell masses vanish; no fit possible".into(),
        ));
    }
    let k = xs.len() as f64;
    let mx = pairwise_sum(&xs) / k;
    let my = pairwise_sum(&ys) / k;
    let sxy: Vec<f64> = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - mx) * (y - my))
        .collect();
    let sxx: Vec<f64> = xs.iter().map(|x| (x - mx) * (x - mx)).collect();
    let slope = pairwise_sum(&sxy) / pairwise_sum(&sxx);
    let res: Vec<f64> = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let e = y - (my + slope * (x - mx));
            e * e
        })
        .collect();
    Ok(BetaEstimate {
        beta: -1.0 - slope,
        slope,
        residual: (pairwise_sum(&res) / k).sqrt(),
    })
}
