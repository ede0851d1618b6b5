//! θ-Poisson kernels, their integrals and the test functions U_{j,N},
//! checked with second-order jets.

use polyharm::exactpoly::rat;
use polyharm::kernels::{
    l_residual_detail, poisson_kernel, u_chain_residual, KernelSpec, PhiField, ThetaPoissonIntegral,
};

fn main() -> polyharm::Result<()> {
    let x = [0.3, -0.2, 0.4];
    for theta in [0.0, 0.5, 1.0, 2.0] {
        let spec = KernelSpec::at_e1(theta, 3)?;
        let r = l_residual_detail(theta, &spec, &x)?;
        println!(
            "θ = {theta}: P_θ(x, e₁) = {:.10}, |L_θ P_θ| / scale = {:.2e}",
            poisson_kernel(&spec, &x)?,
            r.relative()
        );
    }

    let phi = PhiField::new(&rat(1, 2), 2);
    println!(
        "Φ_{{1/2}} in the plane: relative residual {:.2e}",
        l_residual_detail(0.5, &phi, &[0.5, 0.6])?.relative()
    );

    let boundary = |z: &[f64]| z[0] * z[0] - z[1];
    let field = ThetaPoissonIntegral::new(1.0, 3, boundary, 24)?;
    let r = l_residual_detail(1.0, &field, &x)?;
    println!(
        "θ-Poisson integral with θ = 1: value {:.10}, relative residual {:.2e}",
        r.value,
        r.relative()
    );

    for (j, order) in [(0, 2), (1, 2), (2, 3)] {
        println!(
            "U_{{{j},{order}}} chain residual at x: {:.2e}",
            u_chain_residual(j, order, 3, &x)?
        );
    }
    Ok(())
}
