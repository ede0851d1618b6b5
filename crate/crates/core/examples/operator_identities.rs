//! The operators L_θ, Δ, R and M^j, and exact residuals of the identities
//! relating them.

use polyharm::exactpoly::{rat, ExactPolynomial};
use polyharm::operators::{
    apply_l, commutation_residual, correspondence_residual, factorization_residual,
    iterated_coefficient, reflection_residual, ThetaParam,
};
use polyharm::structure::random_polynomial;

fn main() -> polyharm::Result<()> {
    let u = random_polynomial(3, 4, 11);
    let theta = ThetaParam::new(rat(1, 2));
    println!("u = {u}");
    println!("L_{{1/2}} u = {}", apply_l(&theta, &u));

    let checks: Vec<(&str, ExactPolynomial)> = vec![
        (
            "correspondence, λ = 2",
            correspondence_residual(&theta, 2, &u)?,
        ),
        ("reflection", reflection_residual(&theta, &u)?),
        ("commutation, j = 3", commutation_residual(&theta, 3, &u)?),
        ("factorization, N = 3", factorization_residual(3, &u)?),
    ];
    for (name, residual) in checks {
        println!("{name:<24} residual is zero: {}", residual.is_zero());
    }
    println!(
        "iterated coefficient (N=3, j=2, k=2) = {}",
        iterated_coefficient(3, 2, 2)
    );
    Ok(())
}
