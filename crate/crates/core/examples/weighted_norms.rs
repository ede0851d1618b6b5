//! Truncated weighted norms near the boundary, finiteness verdicts and
//! log-log estimates of the critical exponent.

use polyharm::kernels::{JetField, UField};
use polyharm::quadrature::{estimate_beta_p, weighted_norm, WeightedNormRequest};

fn main() -> polyharm::Result<()> {
    let u = UField::new(1, 2, 3)?;
    let f = |x: &[f64]| u.value(x);
    for alpha in [-1.7, -2.0, -2.3] {
        let report = weighted_norm(&WeightedNormRequest::new(&f, 3, 1.0, alpha))?;
        let last = report.truncated.last().copied().unwrap_or(f64::NAN);
        println!(
            "U_{{1,2}}, p = 1, α = {alpha}: last truncated norm {last:.4e}, verdict {:?}",
            report.verdict
        );
    }

    for order in 1..=3 {
        let u0 = UField::new(0, order, 3)?;
        let est = estimate_beta_p(|x: &[f64]| u0.value(x), 3, 1.0, 4, 24)?;
        println!(
            "(1-|x|²)^{}: β ≈ {:.4}, fit residual {:.1e}",
            order - 1,
            est.beta,
            est.residual
        );
    }
    Ok(())
}
