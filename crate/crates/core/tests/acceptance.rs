//! Acceptance checks. Runs as a plain binary and prints one line per
//! criterion; exits nonzero if any criterion fails.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use num_traits::One;
use polyharm::cli::{
    self, DecomposeOutput, Hyp2f1Output, IntegrateOutput, KernelcheckOutput, NormOutput,
    VerifyArgs, VerifyReport,
};
use polyharm::criticality::{
    a_jn, b_jn, beta_critical, beta_piecewise, validity_threshold, ProfileReport,
};
use polyharm::exactpoly::{rat, ExactPolynomial, Rational};
use polyharm::kernels::{l_residual_detail, JetField, PhiField, UField};
use polyharm::operators::{apply_l, m_power, ThetaParam};
use polyharm::quadrature::{
    estimate_beta_p, i_numeric, sphere_rule, weighted_norm, Verdict, WeightedNormRequest,
    DEFAULT_NORM_LEVELS,
};
use polyharm::special::{
    gauss_value, hyp2f1, hyp2f1_series, i_closed_form, phi_theta, Hyp2F1Params, IntegralValue,
    HYP2F1_MAX_TERMS, HYP2F1_TOL,
};
use polyharm::structure::{cellular_decompose, random_polyharmonic};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let report = cli::verify(&VerifyArgs {
        seed: cli::DEFAULT_SEED,
        n_list: vec![2, 3, 4],
        max_order: 4,
        max_degree: 6,
        cases: 200,
    })
    .map_err(|e| e.message)?;
    let secs = start.elapsed().as_secs_f64();
    let mut detail = Vec::new();
    let mut ok = report.all_pass && secs <= 60.0;
    for name in [
        "correspondence",
        "commutation",
        "factorization",
        "iterated_identity",
    ] {
        let s = report
            .suites
            .iter()
            .find(|s| s.name == name)
            .ok_or(format!("suite {name} missing"))?;
        ok &= s.checked >= 200 && s.failed == 0;
        detail.push(format!("{name} {}/{}", s.checked - s.failed, s.checked));
    }
    check(
        ok,
        format!("{}; {secs:.1} s (limit 60 s)", detail.join(", ")),
    )
}

fn criterion_2() -> Outcome {
    let mut checked = 0;
    for seed in 0..100u64 {
        let order = 1 + (seed % 4) as u32;
        let n = 2 + (seed % 3) as usize;
        let max_degree = 6u32.saturating_sub(order - 1);
        let u = random_polyharmonic(n, order, max_degree, 1000 + seed);
        let dec = cellular_decompose(&u, order).map_err(|e| format!("seed {seed}: {e}"))?;
        if !(&dec.reconstruct() - &u).is_zero() {
            return Err(format!("seed {seed}: round trip"));
        }
        if dec.annihilation_residuals().iter().any(|r| !r.is_zero()) {
            return Err(format!("seed {seed}: annihilation"));
        }
        for (j, w) in dec.components.iter().enumerate() {
            let again =
                cellular_decompose(&m_power(w, j as u32), order).map_err(|e| e.to_string())?;
            for (i, wi) in again.components.iter().enumerate() {
                let expected = if i == j {
                    w.clone()
                } else {
                    ExactPolynomial::zero(n)
                };
                if *wi != expected {
                    return Err(format!("seed {seed}: re-decomposition of term {j}"));
                }
            }
        }
        checked += 1;
    }
    let one = ExactPolynomial::one(3);
    let dec = cellular_decompose(&one, 2).map_err(|e| e.to_string())?;
    let quarter = ExactPolynomial::constant(3, rat(1, 4));
    let w0 = &one - &(&m_power(&one, 1) * &quarter);
    check(
        dec.components == vec![w0, quarter],
        format!("{checked} seeded cases exact; worked case n=3 N=2 u=1 reproduced"),
    )
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for n in [2, 3] {
        for a in [0.0, 1.0, 1.5, 3.0] {
            for b in [-1.0, -2.0, -2.5] {
                let exact = i_closed_form(a, b, n).map_err(|e| e.to_string())?;
                let exact = exact
                    .finite()
                    .ok_or(format!("I({a},{b}) reported divergent"))?;
                let numeric = i_numeric(a, b, n, 1e-6).map_err(|e| e.to_string())?;
                worst = worst.max(((numeric - exact) / exact).abs());
            }
        }
    }
    let mut verdicts = true;
    for n in [2, 3] {
        for (a, b) in [(-1.0, -2.0), (1.0, 0.0), (-1.0, 0.0)] {
            verdicts &=
                i_closed_form(a, b, n).map_err(|e| e.to_string())? == IntegralValue::Divergent;
            verdicts &= i_numeric(a, b, n, 1e-6).is_err();
        }
        verdicts &= i_closed_form(-0.99, -0.01, n)
            .map_err(|e| e.to_string())?
            .is_finite();
    }
    let secs = start.elapsed().as_secs_f64();
    check(
        worst <= 1e-6 && verdicts && secs <= 30.0,
        format!("max relative error {worst:.2e} (limit 1e-6); divergence verdicts {}; {secs:.1} s (limit 30 s)", if verdicts { "correct" } else { "wrong" }),
    )
}

fn criterion_4() -> Outcome {
    let mut points = 0;
    for n in [3usize, 4, 5] {
        let start = validity_threshold(n);
        for order in 1..=5u32 {
            let mut k = 0i64;
            loop {
                let p = &start + rat(k, 100);
                if p > Rational::from_integer(5.into()) {
                    break;
                }
                let bs: Vec<Rational> = (0..=order)
                    .map(|j| b_jn(j, order, &p, n))
                    .collect::<Result<_, _>>()
                    .map_err(|e| e.to_string())?;
                let as_: Vec<Rational> = (1..=order)
                    .map(|j| a_jn(j, order, &p, n))
                    .collect::<Result<_, _>>()
                    .map_err(|e| e.to_string())?;
                let min_b = bs.iter().min().cloned().expect("nonempty");
                let min_a = as_.iter().min().cloned().expect("nonempty");
                let pw = beta_piecewise(order, &p, n).map_err(|e| e.to_string())?;
                let crit = beta_critical(order, &p, n).map_err(|e| e.to_string())?;
                if min_b != pw || crit != pw || min_a != min_b {
                    return Err(format!("mismatch at n={n} N={order} p={p}: min b {min_b}, piecewise {pw}, min a {min_a}"));
                }
                points += 1;
                k += 1;
            }
        }
    }
    check(
        true,
        format!("{points} grid points exact (min b = piecewise = min a)"),
    )
}

fn criterion_5() -> Outcome {
    let mut worst_kernel = 0.0f64;
    for n in [2, 3] {
        for theta in [0.0, 0.5, 1.0, 2.0] {
            worst_kernel = worst_kernel.max(
                cli::kernel_max_residual(theta, n, 100, cli::DEFAULT_SEED)
                    .map_err(|e| e.to_string())?,
            );
        }
    }
    let mut exact = true;
    for n in [2usize, 3, 4] {
        for t in 0..=5i64 {
            let theta = Rational::from_integer(t.into());
            let phi = phi_theta(&theta, n)
                .exact_polynomial()
                .ok_or(format!("no polynomial form for θ={t}"))?;
            exact &= apply_l(&ThetaParam::new(theta), &phi).is_zero();
        }
    }
    let mut worst_phi = 0.0f64;
    for n in [2usize, 3, 4] {
        for (tn, td) in [(1, 2), (3, 2)] {
            let theta = rat(tn, td);
            let field = PhiField::new(&theta, n);
            let tf = tn as f64 / td as f64;
            for x in cli::seeded_interior_points(n, 100, cli::DEFAULT_SEED, 0.95) {
                worst_phi = worst_phi.max(
                    l_residual_detail(tf, &field, &x)
                        .map_err(|e| e.to_string())?
                        .relative(),
                );
            }
        }
    }
    check(
        worst_kernel <= 1e-8 && exact && worst_phi <= 1e-8,
        format!("kernel max residual {worst_kernel:.2e}; Φ exact for θ=0..5 {}; Φ_{{1/2,3/2}} max residual {worst_phi:.2e} (limit 1e-8)", if exact { "yes" } else { "no" }),
    )
}

fn criterion_6() -> Outcome {
    let eval = |theta: (i64, i64), n: usize, t: f64| phi_theta(&rat(theta.0, theta.1), n).eval(t);
    // Suprema over r² ∈ [0, 1 - 10^{-k}] on a grid that is uniform in t and
    // geometric near 1.
    let sup_upto = |theta, n, k: u32| -> Result<f64, String> {
        let mut best = f64::NEG_INFINITY;
        for i in 0..=200 {
            best = best.max(eval(theta, n, 0.9 * i as f64 / 200.0).map_err(|e| e.to_string())?);
        }
        let steps = 100 * k;
        for i in 0..=steps {
            let s = 1.0 + (k as f64 - 1.0) * i as f64 / steps as f64;
            best = best.max(eval(theta, n, 1.0 - 10f64.powf(-s)).map_err(|e| e.to_string())?);
        }
        Ok(best)
    };
    let mut details = Vec::new();
    let mut ok = true;
    for n in [2usize, 3] {
        let sups: Vec<f64> = (4..=6)
            .map(|k| sup_upto((-1, 4), n, k))
            .collect::<Result<_, _>>()?;
        let stable = sups
            .windows(2)
            .all(|w| ((w[1] - w[0]) / w[0]).abs() <= 0.01);
        let bounded_sup = sups[2];
        let big = sup_upto((-3, 4), n, 6)?;
        ok &= stable && big > 1e3;
        details.push(format!("n={n}: sup Φ_{{-1/4}} {bounded_sup:.4} (stable to 1%: {stable}), sup Φ_{{-3/4}} {big:.0}"));
    }
    let mut slopes = Vec::new();
    for (tn, td) in [(-1, 4), (1, 4), (3, 4)] {
        let theta = tn as f64 / td as f64;
        let coeffs = phi_theta(&rat(tn, td), 3).coefficients(20_001);
        let ks: Vec<usize> = (0..=40)
            .map(|i| (1000.0 * 20f64.powf(i as f64 / 40.0)).round() as usize)
            .collect();
        let xs: Vec<f64> = ks.iter().map(|&k| (k as f64).ln()).collect();
        let ys: Vec<f64> = ks.iter().map(|&k| coeffs[k].abs().ln()).collect();
        let mx = xs.iter().sum::<f64>() / xs.len() as f64;
        let my = ys.iter().sum::<f64>() / ys.len() as f64;
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
        let slope = sxy / sxx;
        let target = -2.0 * theta - 2.0;
        ok &= (slope - target).abs() <= 0.15;
        slopes.push(format!("θ={tn}/{td} slope {slope:.3} vs {target}"));
    }
    check(ok, format!("{}; {}", details.join("; "), slopes.join(", ")))
}

fn criterion_7() -> Outcome {
    let n = 3usize;
    let rule = sphere_rule(n, 64).map_err(|e| e.to_string())?;
    let dir = [1.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0];
    let mut worst = 0.0f64;
    for t in [0.5, 1.0, 2.0] {
        for r in [0.0, 0.3, 0.7] {
            let y: Vec<f64> = dir.iter().map(|d| d * r).collect();
            let quad = rule.integrate(|z| {
                let d2: f64 = z.iter().zip(&y).map(|(a, b)| (a - b) * (a - b)).sum();
                d2.powf(-t)
            }) / rule.total_weight();
            let nf = n as f64;
            let closed = hyp2f1(
                &Hyp2F1Params::new(t, t - nf / 2.0 + 1.0, nf / 2.0, r * r),
                HYP2F1_TOL,
            )
            .map_err(|e| e.to_string())?;
            worst = worst.max((quad - closed).abs());
        }
    }
    check(
        worst <= 1e-8,
        format!("max |quadrature - ₂F₁| {worst:.2e} (limit 1e-8)"),
    )
}

fn criterion_8() -> Outcome {
    let p = Rational::one();
    let b12 = polyharm::exactpoly::rational_to_f64(&b_jn(1, 2, &p, 3).map_err(|e| e.to_string())?);
    let u = UField::new(1, 2, 3).map_err(|e| e.to_string())?;
    let eval = |x: &[f64]| u.value(x);
    let verdict = |alpha: f64| -> Result<Verdict, String> {
        let req = WeightedNormRequest::new(&eval, 3, 1.0, alpha)
            .with_levels(DEFAULT_NORM_LEVELS.to_vec());
        Ok(weighted_norm(&req).map_err(|e| e.to_string())?.verdict)
    };
    let above = verdict(b12 + 0.3)?;
    let below = verdict(b12 - 0.3)?;
    let mut ok = above == Verdict::Convergent && below == Verdict::Divergent;
    let mut fits = Vec::new();
    for order in 1..=3u32 {
        let f = UField::new(0, order, 3).map_err(|e| e.to_string())?;
        let est =
            estimate_beta_p(|x: &[f64]| f.value(x), 3, 1.0, 4, 24).map_err(|e| e.to_string())?;
        let target = -1.0 - (order as f64 - 1.0);
        ok &= (est.beta - target).abs() <= 0.05;
        fits.push(format!("N={order} β̂ {:.4} vs {target}", est.beta));
    }
    check(
        ok,
        format!(
            "b_{{1,2}}(1) = {b12}: α=b+0.3 {above:?}, α=b-0.3 {below:?}; {}",
            fits.join(", ")
        ),
    )
}

fn criterion_9() -> Outcome {
    let z = 1.0 - 1e-6;
    let mut worst = 0.0f64;
    let mut worst_connection = 0.0f64;
    let mut lines = Vec::new();
    for (a, b, c) in [(0.3, 0.4, 2.0), (1.0, 1.0, 4.5), (-0.5, 0.25, 2.25)] {
        let exact = gauss_value(a, b, c).map_err(|e| e.to_string())?;
        let series = hyp2f1_series(&Hyp2F1Params::new(a, b, c, z), 1e-12, HYP2F1_MAX_TERMS)
            .map_err(|e| format!("series ({a},{b},{c}): {e}"))?;
        let connection =
            hyp2f1(&Hyp2F1Params::new(a, b, c, z), HYP2F1_TOL).map_err(|e| e.to_string())?;
        worst = worst.max((series - exact).abs());
        worst_connection = worst_connection.max((connection - exact).abs());
        lines.push(format!("c-a-b={:.2}", c - a - b));
    }
    check(
        worst <= 1e-4 && worst_connection <= 1e-4,
        format!("{}; max |series - Gauss| {worst:.2e}, max |hyp2f1 - Gauss| {worst_connection:.2e} (limit 1e-4)", lines.join(", ")),
    )
}

fn run_bin(args: &[&str], stdin: Option<&str>) -> Result<(i32, String), String> {
    use std::io::Write as _;
    use std::process::Stdio;
    let mut child = Command::new(env!("CARGO_BIN_EXE_polyharm"))
        .args(args)
        .env_remove(cli::OUT_ENV)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .map_err(|e| e.to_string())?;
    let input = stdin.unwrap_or("").to_string();
    let mut pipe = child.stdin.take().expect("piped stdin");
    pipe.write_all(input.as_bytes())
        .map_err(|e| e.to_string())?;
    drop(pipe);
    let out = child.wait_with_output().map_err(|e| e.to_string())?;
    Ok((
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
    ))
}

fn load_schema(name: &str) -> Result<serde_json::Value, String> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("schemas")
        .join(format!("{name}.schema.json"));
    let text = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn schema_round_trip<T>(name: &str, args: &[&str], stdin: Option<&str>) -> Result<(), String>
where
    T: serde::de::DeserializeOwned + serde::Serialize,
{
    let (code, out) = run_bin(args, stdin)?;
    if code != 0 {
        return Err(format!("{name}: exit {code}"));
    }
    let schema = load_schema(name)?;
    let validator =
        jsonschema::validator_for(&schema).map_err(|e| format!("{name} schema: {e}"))?;
    let value: serde_json::Value =
        serde_json::from_str(&out).map_err(|e| format!("{name}: {e}"))?;
    if let Some(err) = validator.iter_errors(&value).next() {
        return Err(format!("{name}: schema violation {err}"));
    }
    let typed: T = serde_json::from_str(&out).map_err(|e| format!("{name}: {e}"))?;
    let again = serde_json::to_string_pretty(&typed).map_err(|e| e.to_string())? + "\n";
    if again != out {
        return Err(format!("{name}: re-serialization differs"));
    }
    Ok(())
}

fn criterion_10() -> Outcome {
    let poly = r#"{"n":3,"terms":[{"exps":[0,0,0],"num":1,"den":1}]}"#;
    schema_round_trip::<VerifyReport>("verify", &["verify", "--cases", "20"], None)?;
    schema_round_trip::<DecomposeOutput>(
        "decompose",
        &["decompose", "--in", "-", "--N", "2"],
        Some(poly),
    )?;
    schema_round_trip::<ProfileReport>(
        "regions",
        &[
            "regions", "--n", "3", "--N", "2", "--p", "1", "--alpha", "-1.5",
        ],
        None,
    )?;
    schema_round_trip::<IntegrateOutput>(
        "integrate",
        &["integrate", "--a", "0", "--b", "-2", "--n", "2"],
        None,
    )?;
    schema_round_trip::<KernelcheckOutput>(
        "kernelcheck",
        &["kernelcheck", "--theta", "1", "--n", "3"],
        None,
    )?;
    schema_round_trip::<Hyp2f1Output>(
        "hyp2f1",
        &[
            "hyp2f1", "--a", "0.5", "--b", "1", "--c", "1.5", "--z", "0.25",
        ],
        None,
    )?;
    schema_round_trip::<NormOutput>(
        "norm",
        &[
            "norm", "--u", "1,2", "--n", "3", "--p", "1", "--alpha", "-1.7", "--levels", "4,8,12",
        ],
        None,
    )?;
    let poly_schema = load_schema("polynomial")?;
    let (_, dec) = run_bin(&["decompose", "--in", "-", "--N", "2"], Some(poly))?;
    let dec: serde_json::Value = serde_json::from_str(&dec).map_err(|e| e.to_string())?;
    let mut polys =
        vec![serde_json::from_str::<serde_json::Value>(poly).map_err(|e| e.to_string())?];
    polys.extend(dec["components"].as_array().cloned().unwrap_or_default());
    if !polys.iter().all(|v| jsonschema::is_valid(&poly_schema, v)) {
        return Err("polynomial documents fail their schema".into());
    }
    let (code, header) = run_bin(
        &[
            "critcurve",
            "--n",
            "3",
            "--N",
            "2",
            "--p-min",
            "2/3",
            "--p-max",
            "2",
            "--step",
            "1/3",
        ],
        None,
    )?;
    let header_ok = code == 0
        && header.lines().next()
            == Some("p,b_0,b_1,b_2,a_1,a_2,beta,valid,branch,entangled_window");
    let (code1, first) = run_bin(&["verify"], None)?;
    let (code2, second) = run_bin(&["verify"], None)?;
    let report: VerifyReport = serde_json::from_str(&first).map_err(|e| e.to_string())?;
    check(
        header_ok && code1 == 0 && code2 == 0 && first == second && report.all_pass,
        format!("8 schemas validated and round-tripped; CSV header stable {header_ok}; verify exit {code1}, rerun byte-identical {}", first == second),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("exact identity suite", criterion_1),
        ("cellular decomposition", criterion_2),
        ("I(a,b) closed form vs quadrature", criterion_3),
        ("critical curve min = piecewise", criterion_4),
        ("kernel annihilation", criterion_5),
        ("Φ_θ boundedness", criterion_6),
        ("sphere integral vs ₂F₁", criterion_7),
        ("membership boundary", criterion_8),
        ("Gauss summation", criterion_9),
        ("CLI schemas and determinism", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(d) => println!("criterion {:>2} PASS  {name}: {d} [{secs:.1} s]", i + 1),
            Err(d) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {d} [{secs:.1} s]", i + 1)
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
