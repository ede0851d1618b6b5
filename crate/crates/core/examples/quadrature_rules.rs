//! Gauss–Jacobi, sphere and ball rules, and the integral I(a, b).

use polyharm::quadrature::{
    ball_rule, ball_volume, compare_integral, gauss_rule, sphere_rule, GaussKind, RadialKind,
};

fn main() -> polyharm::Result<()> {
    let rule = gauss_rule(
        GaussKind::Jacobi {
            alpha: 0.5,
            beta: -0.5,
        },
        5,
    )?;
    for (x, w) in rule.nodes.iter().zip(&rule.weights) {
        println!("node {x:+.15}  weight {w:.15}");
    }

    let sphere = sphere_rule(3, 8)?;
    println!(
        "sphere rule: {} nodes, mean of z₀⁴ = {:.15} (exact 1/5)",
        sphere.len(),
        sphere.integrate(|z| z[0].powi(4))
    );

    let ball = ball_rule(3, RadialKind::Legendre, 8, 8)?;
    println!(
        "ball rule: volume {:.15} vs {:.15}",
        ball.integrate(|_| 1.0),
        ball_volume(3)
    );

    for (a, b, n) in [(0.0, -2.0, 2), (1.5, -2.5, 3), (-1.0, -2.0, 3)] {
        let c = compare_integral(a, b, n, 1e-8)?;
        println!(
            "I({a}, {b}) in n = {n}: closed {:?}, numeric {:?}, relative error {:?}",
            c.closed_form, c.numeric, c.relative_error
        );
    }
    Ok(())
}
