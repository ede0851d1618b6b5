//! Exact rational polynomials: arithmetic, derivatives, evaluation and JSON.

use polyharm::exactpoly::{rat, ExactPolynomial};
use polyharm::operators::{laplacian, radial};

fn main() -> polyharm::Result<()> {
    let x = ExactPolynomial::variable(3, 0);
    let y = ExactPolynomial::variable(3, 1);
    let r2 = ExactPolynomial::norm_squared(3);

    let u = &(&x * &x) - &(&y * &y).scale(&rat(1, 3));
    let v = &u * &r2;
    println!("u       = {u}");
    println!("|x|² u  = {v}");
    println!("Δu      = {}", laplacian(&u));
    println!("R u     = {}", radial(&u));
    println!("∂₀(u²)  = {}", u.pow(2).derivative(0));

    let at = [rat(1, 2), rat(-1, 3), rat(2, 5)];
    println!("v(1/2, -1/3, 2/5) = {}", v.eval_exact(&at)?);

    let json = v.to_json();
    println!("{json}");
    assert_eq!(ExactPolynomial::parse_json(&json)?, v);
    Ok(())
}
