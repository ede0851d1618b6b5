//! Polyharmonic functions on the unit ball of `R^n`.
//!
//! The crate is organized around the operator
//! `L_θ = (1-|x|²)Δ + 4θ x·∇ + 2θ(n-2-2θ)` and the objects it organizes:
//!
//! - [`exactpoly`]: sparse multivariate polynomials over exact rationals.
//! - [`operators`]: exact `Δ`, `R`, `M^j`, `L_θ` and residuals of the
//!   identities they satisfy.
//! - [`structure`]: Almansi representations, harmonic decomposition and the
//!   cellular decomposition `u = Σ_j (1-|x|²)^j w_j` with `L_{N-j-1} w_j = 0`.
//! - [`special`]: Gamma, Pochhammer, `₂F₁`, `Φ_θ`, `C_θ` and the closed form
//!   of `I(a, b)`.
//! - [`quadrature`]: Gauss rules, sphere and ball product rules, weighted
//!   norms and critical exponent estimates.
//! - [`kernels`]: second-order jets and the θ-Poisson kernels `P_θ`, the
//!   test functions `U_{j,N}` and θ-Poisson integrals.
//! - [`criticality`]: the exponent calculus `b_{j,N}`, `a_{j,N}`, `β(N,p)`
//!   and region classifiers.
//! - [`cli`]: the command implementations behind the `polyharm` binary.

pub mod cli;
pub mod criticality;
pub mod error;
pub mod exactpoly;
pub mod kernels;
pub mod linalg;
pub mod operators;
pub mod quadrature;
pub mod special;
pub mod structure;
pub mod sum;

pub use error::{Error, Result};
pub use exactpoly::{ExactPolynomial, Monomial, Rational};
pub use operators::ThetaParam;
