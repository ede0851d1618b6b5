//! The critical exponent β(N, p), the exponents b_{j,N} and a_{j,N}, and
//! region classification of (p, α).

use polyharm::criticality::{critical_curve, write_curve_csv, CriticalProfile};
use polyharm::exactpoly::rat;

fn main() -> polyharm::Result<()> {
    let rows = critical_curve(3, 2, &rat(1, 2), &rat(2, 1), &rat(1, 6))?;
    write_curve_csv(2, &rows, std::io::stdout())?;

    for (p, alpha) in [
        (rat(1, 1), rat(-3, 2)),
        (rat(1, 1), rat(-5, 2)),
        (rat(3, 4), rat(-2, 1)),
    ] {
        let report = CriticalProfile::new(3, 2, p, Some(alpha))?.report();
        println!(
            "{}",
            serde_json::to_string(&report).expect("report serializes")
        );
    }

    let n2 = CriticalProfile::new(2, 2, rat(1, 2), Some(rat(-8, 5)))?.report();
    println!("n = 2: entangled = {:?}, J = {:?}", n2.entangled, n2.j_set);
    Ok(())
}
