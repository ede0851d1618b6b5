//! Gamma, the Gauss hypergeometric function and the radial profiles Φ_θ.

use polyharm::exactpoly::rat;
use polyharm::special::{gamma, gauss_value, hyp2f1, phi_theta, Hyp2F1Params, HYP2F1_TOL};

fn main() -> polyharm::Result<()> {
    println!("Γ(1/2)² = {}", gamma(0.5)?.powi(2));
    println!("Γ(-3/2) = {}", gamma(-1.5)?);

    for z in [-0.9, -0.3, 0.4, 0.8, 0.999_999] {
        let v = hyp2f1(&Hyp2F1Params::new(0.3, 0.4, 2.0, z), HYP2F1_TOL)?;
        println!("₂F₁(0.3, 0.4; 2; {z}) = {v}");
    }
    println!("Gauss sum at z = 1:      {}", gauss_value(0.3, 0.4, 2.0)?);

    for (num, den) in [(2, 1), (1, 2), (-1, 4), (-3, 4)] {
        let phi = phi_theta(&rat(num, den), 3);
        let exact = phi
            .exact_polynomial()
            .map(|p| p.to_string())
            .unwrap_or_else(|| "-".into());
        println!(
            "Φ_{num}/{den}: bounded {}, Φ(0.99) = {:.6}, polynomial form {exact}",
            phi.is_bounded(),
            phi.eval(0.99)?
        );
    }
    Ok(())
}
