//! Cellular, Almansi and harmonic decompositions of polyharmonic polynomials.

use polyharm::exactpoly::ExactPolynomial;
use polyharm::structure::{
    almansi, cellular_decompose, harmonic_decomposition, random_polyharmonic,
};

fn main() -> polyharm::Result<()> {
    let one = ExactPolynomial::one(3);
    let dec = cellular_decompose(&one, 2)?;
    for (j, w) in dec.components.iter().enumerate() {
        println!("u = 1, N = 2: w_{j} = {w}");
    }

    let u = random_polyharmonic(3, 3, 2, 5);
    println!("\nu = {u}");
    let dec = cellular_decompose(&u, 3)?;
    for (j, w) in dec.components.iter().enumerate() {
        println!("w_{j} = {w}");
    }
    println!("round trip exact: {}", (&dec.reconstruct() - &u).is_zero());
    println!(
        "annihilation exact: {}",
        dec.annihilation_residuals()
            .iter()
            .all(ExactPolynomial::is_zero)
    );

    let form = almansi(&u, 3)?;
    for (k, h) in form.components.iter().enumerate() {
        println!("Almansi u_{k} = {h}");
    }

    let q = u.homogeneous_part(2);
    for (j, h) in harmonic_decomposition(&q)?.iter().enumerate() {
        println!("degree-2 part, |x|^{} piece: {h}", 2 * j);
    }
    Ok(())
}
