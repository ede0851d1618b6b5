//! Structure of polyharmonic polynomials.
//!
//! Three representations of an `N`-harmonic polynomial `u` are computed here,
//! each exactly:
//!
//! - Almansi: `u = Σ_k |x|^{2k} u_k` with harmonic `u_k`;
//! - the rearranged Almansi form `u = Σ_j (1-|x|²)^j v_j` with harmonic `v_j`;
//! - the cellular decomposition `u = Σ_j (1-|x|²)^j w_j` where
//!   `L_{N-j-1} w_j = 0`, built by induction on `N`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactpoly::{int, rat, ExactPolynomial, Monomial, Rational};
use crate::linalg::{solve_exact, Solution};
use crate::operators::{apply_l, laplacian, laplacian_power, m_power, ThetaParam};

pub fn is_polyharmonic(u: &ExactPolynomial, order: u32) -> bool {
    laplacian_power(u, order).is_zero()
}

fn require_polyharmonic(u: &ExactPolynomial, order: u32) -> Result<()> {
    if order == 0 {
        return Err(Error::InvalidParameter("order N must be at least 1".into()));
    }
    if !is_polyharmonic(u, order) {
        return Err(Error::NotPolyharmonic { order });
    }
    Ok(())
}

/// All exponent vectors of total degree `d` in `n` variables, in ascending
/// graded-lex order.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Monomial> {
    fn rec(n: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if prefix.len() == n - 1 {
            prefix.push(left);
            out.push(Monomial::new(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=left).rev() {
            prefix.push(e);
            rec(n, left - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, d, &mut Vec::with_capacity(n), &mut out);
    out
}

/// Splits a homogeneous `q` of degree `m` as `q = Σ_j |x|^{2j} h_j` with
/// each `h_j` harmonic and homogeneous of degree `m - 2j`.
///
/// Each step solves the square system `Δ(|x|² r) = Δq` for the homogeneous
/// `r` of degree `m - 2` exactly; then `h_0 = q - |x|² r` is harmonic and the
/// procedure continues on `r`.
pub fn harmonic_decomposition(q: &ExactPolynomial) -> Result<Vec<ExactPolynomial>> {
    if !q.is_homogeneous() {
        return Err(Error::NonHomogeneous);
    }
    let n = q.dimension();
    let norm2 = ExactPolynomial::norm_squared(n);
    let mut parts = Vec::new();
    let mut current = q.clone();
    loop {
        let m = match current.degree() {
            None => {
                if parts.is_empty() {
                    parts.push(current);
                }
                return Ok(parts);
            }
            Some(m) => m,
        };
        let target = laplacian(&current);
        if target.is_zero() {
            parts.push(current);
            return Ok(parts);
        }
        let basis = monomials_of_degree(n, m - 2);
        let index: std::collections::HashMap<&Monomial, usize> =
            basis.iter().enumerate().map(|(i, b)| (b, i)).collect();
        let size = basis.len();
        let mut matrix = vec![vec![Rational::from_integer(0.into()); size]; size];
        for (col, mono) in basis.iter().enumerate() {
            let image = laplacian(&(&norm2 * &ExactPolynomial::monomial(mono.clone(), int(1))));
            for (row_mono, c) in image.terms() {
                matrix[index[row_mono]][col] = c.clone();
            }
        }
        let rhs: Vec<Rational> = basis.iter().map(|b| target.coefficient(b)).collect();
        let coeffs = match solve_exact(&matrix, &rhs, size) {
            Solution::Unique(x) => x,
            other => unreachable!("Δ(|x|²·) is invertible on homogeneous polynomials: {other:?}"),
        };
        let rest = ExactPolynomial::from_terms(
            n,
            basis
                .iter()
                .zip(coeffs)
                .map(|(b, c)| (b.exponents().to_vec(), c)),
        )?;
        parts.push(&current - &(&norm2 * &rest));
        current = rest;
        if current.is_zero() {
            return Ok(parts);
        }
    }
}

/// The harmonic component `h_0` of a homogeneous polynomial.
pub fn harmonic_projection(q: &ExactPolynomial) -> Result<ExactPolynomial> {
    Ok(harmonic_decomposition(q)?.swap_remove(0))
}

/// `u = Σ_{k<N} |x|^{2k} u_k`, each `u_k` harmonic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlmansiForm {
    #[serde(rename = "N")]
    pub order: u32,
    pub components: Vec<ExactPolynomial>,
}

impl AlmansiForm {
    pub fn reconstruct(&self) -> ExactPolynomial {
        let n = self.components[0].dimension();
        let norm2 = ExactPolynomial::norm_squared(n);
        let mut acc = ExactPolynomial::zero(n);
        for (k, uk) in self.components.iter().enumerate() {
            acc = &acc + &(&norm2.pow(k as u32) * uk);
        }
        acc
    }
}

pub fn almansi(u: &ExactPolynomial, order: u32) -> Result<AlmansiForm> {
    require_polyharmonic(u, order)?;
    let n = u.dimension();
    let mut components = vec![ExactPolynomial::zero(n); order as usize];
    let top = u.degree().unwrap_or(0);
    for m in 0..=top {
        let part = u.homogeneous_part(m);
        if part.is_zero() {
            continue;
        }
        for (k, h) in harmonic_decomposition(&part)?.into_iter().enumerate() {
            if h.is_zero() {
                continue;
            }
            let slot = components
                .get_mut(k)
                .ok_or(Error::NotPolyharmonic { order })?;
            *slot = &*slot + &h;
        }
    }
    Ok(AlmansiForm { order, components })
}

fn binomial(k: u32, j: u32) -> Rational {
    let mut acc = int(1);
    for i in 0..j {
        acc = acc * int((k - i) as i64) / int((i + 1) as i64);
    }
    acc
}

/// `v_j = (-1)^j Σ_{k=j}^{N-1} C(k, j) u_k`, so that
/// `u = Σ_j (1-|x|²)^j v_j` with harmonic `v_j`.
pub fn almansi_rearranged(u: &ExactPolynomial, order: u32) -> Result<Vec<ExactPolynomial>> {
    let form = almansi(u, order)?;
    Ok(rearrange(&form))
}

/// Binomial transform of an Almansi form.
pub fn rearrange(form: &AlmansiForm) -> Vec<ExactPolynomial> {
    let n = form.components[0].dimension();
    let order = form.order;
    (0..order)
        .map(|j| {
            let mut acc = ExactPolynomial::zero(n);
            for k in j..order {
                acc = &acc + &form.components[k as usize].scale(&binomial(k, j));
            }
            if j % 2 == 1 {
                -acc
            } else {
                acc
            }
        })
        .collect()
}

/// `Σ_j (1-|x|²)^j c_j`.
pub fn sum_of_m_powers(components: &[ExactPolynomial]) -> ExactPolynomial {
    let n = components[0].dimension();
    components
        .iter()
        .enumerate()
        .fold(ExactPolynomial::zero(n), |acc, (j, c)| {
            &acc + &m_power(c, j as u32)
        })
}

/// The cellular decomposition `u = Σ_j M^j[w_j]` with `L_{N-j-1}[w_j] = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellularComponents {
    #[serde(rename = "N")]
    pub order: u32,
    pub components: Vec<ExactPolynomial>,
}

impl CellularComponents {
    pub fn reconstruct(&self) -> ExactPolynomial {
        sum_of_m_powers(&self.components)
    }

    /// `L_{N-j-1}[w_j]` for every `j`; all zero for a valid decomposition.
    pub fn annihilation_residuals(&self) -> Vec<ExactPolynomial> {
        self.components
            .iter()
            .enumerate()
            .map(|(j, w)| apply_l(&ThetaParam::integer(self.order as i64 - j as i64 - 1), w))
            .collect()
    }

    pub fn is_valid_for(&self, u: &ExactPolynomial) -> bool {
        self.components.len() == self.order as usize
            && self
                .annihilation_residuals()
                .iter()
                .all(ExactPolynomial::is_zero)
            && &self.reconstruct() == u
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("components serialize")
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        let c: CellularComponents =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if c.order == 0 || c.components.len() != c.order as usize {
            return Err(Error::Parse(format!(
                "expected {} components, found {}",
                c.order,
                c.components.len()
            )));
        }
        let n = c.components[0].dimension();
        if let Some(bad) = c.components.iter().find(|w| w.dimension() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: bad.dimension(),
            });
        }
        Ok(c)
    }
}

/// Cellular decomposition of an `N`-harmonic polynomial.
///
/// For `N = 1` the decomposition is `(u)`. Otherwise, with `N₀ = N - 1`,
/// `g = L_{N₀}[u]` is `N₀`-harmonic with decomposition `(v_0, …, v_{N₀-1})`,
/// and
///
/// ```text
/// w_0 = u + (1/4) Σ_j M^{j+1}[v_j] / ((j+1)(2N₀-j)),
/// w_j = -v_{j-1} / (4j(2N₀-j+1)),   j = 1..N₀.
/// ```
pub fn cellular_decompose(u: &ExactPolynomial, order: u32) -> Result<CellularComponents> {
    require_polyharmonic(u, order)?;
    Ok(CellularComponents {
        order,
        components: decompose_inner(u, order),
    })
}

fn decompose_inner(u: &ExactPolynomial, order: u32) -> Vec<ExactPolynomial> {
    let n = u.dimension();
    if order == 1 {
        return vec![u.clone()];
    }
    let n0 = order - 1;
    let g = apply_l(&ThetaParam::integer(n0 as i64), u);
    if g.is_zero() {
        let mut out = vec![ExactPolynomial::zero(n); order as usize];
        out[0] = u.clone();
        return out;
    }
    let v = decompose_inner(&g, n0);
    let n0i = n0 as i64;
    let mut correction = ExactPolynomial::zero(n);
    for (j, vj) in v.iter().enumerate() {
        let j = j as i64;
        let scale = rat(1, 4 * (j + 1) * (2 * n0i - j));
        correction = &correction + &m_power(vj, j as u32 + 1).scale(&scale);
    }
    let mut out = Vec::with_capacity(order as usize);
    out.push(u + &correction);
    for j in 1..=n0i {
        let scale = rat(-1, 4 * j * (2 * n0i - j + 1));
        out.push(v[(j - 1) as usize].scale(&scale));
    }
    out
}

/// A random harmonic polynomial with terms of every degree up to
/// `max_degree`, from integer coefficients in `[-5, 5]`.
fn random_harmonic<R: Rng>(rng: &mut R, n: usize, max_degree: u32) -> ExactPolynomial {
    let mut acc = ExactPolynomial::zero(n);
    for d in 0..=max_degree {
        let mut q = ExactPolynomial::zero(n);
        for m in monomials_of_degree(n, d) {
            if rng.gen_bool(0.5) {
                let c: i64 = rng.gen_range(-5..=5);
                q = &q + &ExactPolynomial::monomial(m, int(c));
            }
        }
        if !q.is_zero() {
            acc = &acc + &harmonic_projection(&q).expect("homogeneous by construction");
        }
    }
    acc
}

/// Deterministic random polynomial of degree at most `max_degree`, with
/// each monomial present with probability 1/2 and an integer coefficient in
/// `[-5, 5]`.
pub fn random_polynomial(n: usize, max_degree: u32, seed: u64) -> ExactPolynomial {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut acc = ExactPolynomial::zero(n);
    for d in 0..=max_degree {
        for m in monomials_of_degree(n, d) {
            if rng.gen_bool(0.5) {
                let c: i64 = rng.gen_range(-5..=5);
                acc = &acc + &ExactPolynomial::monomial(m, int(c));
            }
        }
    }
    acc
}

/// Deterministic random `N`-harmonic polynomial
/// `Σ_{k<N} |x|^{2k} h_k`, with each `h_k` harmonic of degree at most
/// `max_degree`.
pub fn random_polyharmonic(n: usize, order: u32, max_degree: u32, seed: u64) -> ExactPolynomial {
    assert!(n >= 2, "dimension must be at least 2");
    assert!(order >= 1, "order must be at least 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let norm2 = ExactPolynomial::norm_squared(n);
    let mut u = ExactPolynomial::zero(n);
    for k in 0..order {
        let h = random_harmonic(&mut rng, n, max_degree);
        u = &u + &(&norm2.pow(k) * &h);
    }
    assert!(
        is_polyharmonic(&u, order),
        "constructed polynomial must be {order}-harmonic"
    );
    u
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(n: usize, i: usize) -> ExactPolynomial {
        ExactPolynomial::variable(n, i)
    }

    #[test]
    fn polyharmonic_predicate() {
        for order in 1..=4 {
            let u = ExactPolynomial::boundary_defect(3).pow(order - 1);
            assert!(is_polyharmonic(&u, order));
        }
        assert!(!is_polyharmonic(&x(3, 0).pow(2), 1));
        // degree < 2N is always N-harmonic
        assert!(is_polyharmonic(&(&x(2, 0).pow(5) * &x(2, 1)), 4));
    }

    #[test]
    fn monomial_enumeration() {
        assert_eq!(monomials_of_degree(3, 2).len(), 6);
        assert_eq!(monomials_of_degree(4, 6).len(), 84);
        let ms = monomials_of_degree(2, 3);
        assert!(ms.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn harmonic_decomposition_examples() {
        let n = 3;
        let q = x(n, 0).pow(2);
        let parts = harmonic_decomposition(&q).unwrap();
        let h0 = &q - &ExactPolynomial::norm_squared(n).scale(&rat(1, 3));
        assert_eq!(parts, vec![h0, ExactPolynomial::constant(n, rat(1, 3))]);

        let h = &x(n, 0) * &x(n, 1);
        assert_eq!(harmonic_decomposition(&h).unwrap(), vec![h]);

        let parts = harmonic_decomposition(&ExactPolynomial::norm_squared(n)).unwrap();
        assert_eq!(
            parts,
            vec![ExactPolynomial::zero(n), ExactPolynomial::one(n)]
        );

        assert!(matches!(
            harmonic_decomposition(&(&x(n, 0) + &ExactPolynomial::one(n))),
            Err(Error::NonHomogeneous)
        ));
    }

    #[test]
    fn almansi_examples() {
        let n = 3;
        let h = &x(n, 0) * &x(n, 2);
        let form = almansi(&h, 1).unwrap();
        assert_eq!(form.components, vec![h.clone()]);

        let form = almansi(&ExactPolynomial::norm_squared(n), 2).unwrap();
        assert_eq!(
            form.components,
            vec![ExactPolynomial::zero(n), ExactPolynomial::one(n)]
        );

        let m = ExactPolynomial::boundary_defect(n);
        let form = almansi(&m, 2).unwrap();
        assert_eq!(
            form.components,
            vec![ExactPolynomial::one(n), -ExactPolynomial::one(n)]
        );
        assert_eq!(form.reconstruct(), m);

        assert!(matches!(
            almansi(&x(n, 0).pow(2), 1),
            Err(Error::NotPolyharmonic { order: 1 })
        ));
    }

    #[test]
    fn rearranged_almansi() {
        let u = random_polyharmonic(3, 2, 3, 11);
        let form = almansi(&u, 2).unwrap();
        let v = almansi_rearranged(&u, 2).unwrap();
        assert_eq!(v[0], &form.components[0] + &form.components[1]);
        assert_eq!(v[1], -form.components[1].clone());
        assert_eq!(sum_of_m_powers(&v), u);
        let single = almansi_rearranged(&x(2, 0), 1).unwrap();
        assert_eq!(single, vec![x(2, 0)]);
    }

    #[test]
    fn worked_cellular_example() {
        let n = 3;
        let one = ExactPolynomial::one(n);
        let dec = cellular_decompose(&one, 2).unwrap();
        let w0 = &one - &ExactPolynomial::boundary_defect(n).scale(&rat(1, 4));
        assert_eq!(
            dec.components,
            vec![w0, ExactPolynomial::constant(n, rat(1, 4))]
        );
        assert!(dec.is_valid_for(&one));
    }

    #[test]
    fn cellular_degenerate_inputs() {
        let z = ExactPolynomial::zero(2);
        for order in 1..=4 {
            let dec = cellular_decompose(&z, order).unwrap();
            assert!(dec.components.iter().all(ExactPolynomial::is_zero));
            assert_eq!(dec.components.len(), order as usize);
        }
        // Harmonic u with L_{N-1} u = 0 only for N = 1 in general; check N = 1 echo.
        let h = &x(3, 0) * &x(3, 1);
        assert_eq!(cellular_decompose(&h, 1).unwrap().components, vec![h]);
        assert!(matches!(
            cellular_decompose(&x(3, 0).pow(4), 2),
            Err(Error::NotPolyharmonic { order: 2 })
        ));
    }

    #[test]
    fn cellular_idempotence_on_single_terms() {
        let u = random_polyharmonic(2, 3, 3, 5);
        let dec = cellular_decompose(&u, 3).unwrap();
        assert!(dec.is_valid_for(&u));
        for (j, w) in dec.components.iter().enumerate() {
            let term = m_power(w, j as u32);
            let again = cellular_decompose(&term, 3).unwrap();
            for (i, wi) in again.components.iter().enumerate() {
                if i == j {
                    assert_eq!(wi, w);
                } else {
                    assert!(wi.is_zero());
                }
            }
        }
    }

    #[test]
    fn random_generation_is_deterministic() {
        let a = random_polyharmonic(3, 2, 4, 42);
        let b = random_polyharmonic(3, 2, 4, 42);
        assert_eq!(a, b);
        assert!(is_polyharmonic(&a, 2));
        let c = random_polyharmonic(2, 1, 0, 9);
        assert!(c.degree().unwrap_or(0) == 0);
    }

    #[test]
    fn components_json_round_trip() {
        let dec = cellular_decompose(&ExactPolynomial::one(3), 2).unwrap();
        let text = dec.to_json();
        assert!(text.starts_with(r#"{"N":2,"components":["#));
        assert_eq!(CellularComponents::parse_json(&text).unwrap(), dec);
        assert!(CellularComponents::parse_json(r#"{"N":2,"components":[]}"#).is_err());
    }
}
