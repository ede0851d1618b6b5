//! Command implementations behind the `polyharm` binary.
//!
//! Every subcommand writes one JSON document (or CSV for `critcurve`) to
//! stdout. Exit codes: 0 success, 2 domain error, 3 input error, 4 failed
//! tolerance or identity check. When `POLYHARM_OUT` names a directory, the
//! output is also written there as `<subcommand>.json` or `.csv`.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_traits::{Pow, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::criticality::{critical_curve, write_curve_csv, CriticalProfile, ProfileReport};
use crate::error::Error;
use crate::exactpoly::{rat, rational_to_f64, ExactPolynomial, Rational};
use crate::kernels::{l_residual_detail, JetField, KernelSpec, PolynomialField, UField};
use crate::operators::{
    commutation_residual, correspondence_residual, factorization_residual,
    iterated_identity_residual, laplacian_power, m_power, reflection_residual, ThetaParam,
};
use crate::quadrature::{
    compare_integral, weighted_norm, IntegralComparison, Verdict, WeightedNormRequest,
    DEFAULT_NORM_LEVELS,
};
use crate::special::{hyp2f1, Hyp2F1Params, IntegralValue, HYP2F1_TOL};
use crate::structure::{
    cellular_decompose, random_polyharmonic, random_polynomial, CellularComponents,
};

/// Seed used by `verify` when none is given.
pub const DEFAULT_SEED: u64 = 20_240_601;

/// Tolerance of `kernelcheck`.
pub const KERNEL_TOLERANCE: f64 = 1e-8;

/// Environment variable naming the artifact directory.
pub const OUT_ENV: &str = "POLYHARM_OUT";

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_TOLERANCE: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "polyharm",
    version,
    about = "Polyharmonic functions on the unit ball"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the exact operator identities and the cellular decomposition on seeded cases.
    Verify(VerifyArgs),
    /// Cellular decomposition of a polynomial read from JSON.
    Decompose(DecomposeArgs),
    /// Critical curve β(N, p) and the exponents b, a as CSV.
    Critcurve(CritcurveArgs),
    /// Region classification of (p, α).
    Regions(RegionsArgs),
    /// Closed form and quadrature of I(a, b).
    Integrate(IntegrateArgs),
    /// L_θ applied to the θ-Poisson kernel at seeded interior points.
    Kernelcheck(KernelcheckArgs),
    /// The Gauss hypergeometric function.
    Hyp2f1(Hyp2f1Args),
    /// Truncated weighted norms and a finiteness verdict.
    Norm(NormArgs),
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, value_delimiter = ',', default_value = "2,3,4")]
    pub n_list: Vec<usize>,
    #[arg(long = "max-N", default_value_t = 4)]
    pub max_order: u32,
    #[arg(long, default_value_t = 6)]
    pub max_degree: u32,
    #[arg(long, default_value_t = 200)]
    pub cases: u32,
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    /// Polynomial JSON file, or `-` for stdin.
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long = "N")]
    pub order: u32,
}

#[derive(Debug, Args)]
pub struct CritcurveArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long = "N")]
    pub order: u32,
    #[arg(long, allow_hyphen_values = true)]
    pub p_min: String,
    #[arg(long, allow_hyphen_values = true)]
    pub p_max: String,
    #[arg(long, allow_hyphen_values = true)]
    pub step: String,
}

#[derive(Debug, Args)]
pub struct RegionsArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long = "N")]
    pub order: u32,
    #[arg(long, allow_hyphen_values = true)]
    pub p: String,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: String,
}

#[derive(Debug, Args)]
pub struct IntegrateArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub a: String,
    #[arg(long, allow_hyphen_values = true)]
    pub b: String,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value = "1e-6")]
    pub tol: String,
}

#[derive(Debug, Args)]
pub struct KernelcheckArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub theta: String,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 100)]
    pub points: u32,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct Hyp2f1Args {
    #[arg(long, allow_hyphen_values = true)]
    pub a: String,
    #[arg(long, allow_hyphen_values = true)]
    pub b: String,
    #[arg(long, allow_hyphen_values = true)]
    pub c: String,
    #[arg(long, allow_hyphen_values = true)]
    pub z: String,
}

#[derive(Debug, Args)]
pub struct NormArgs {
    /// Polynomial JSON file, or `-` for stdin.
    #[arg(long = "in", conflicts_with = "u")]
    pub input: Option<PathBuf>,
    /// Use the test function U_{j,N} given as `j,N` instead of a polynomial.
    #[arg(long, value_delimiter = ',')]
    pub u: Option<Vec<u32>>,
    /// Dimension for `--u`.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub p: String,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: String,
    #[arg(long, value_delimiter = ',')]
    pub levels: Option<Vec<u32>>,
}

/// Failure of a subcommand, carrying its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) | Error::InvalidParameter(_) | Error::DimensionMismatch { .. } => {
                EXIT_INPUT
            }
            Error::NonConvergence { .. } | Error::Evaluation(_) => EXIT_TOLERANCE,
            _ => EXIT_DOMAIN,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `num/den`, an integer, or a decimal with optional exponent
/// (`-1.25`, `3e-2`) into an exact rational.
pub fn parse_rational(text: &str) -> crate::Result<Rational> {
    let t = text.trim();
    let bad = || Error::InvalidParameter(format!("not a rational number: {text:?}"));
    if let Some((num, den)) = t.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(Error::InvalidParameter(format!(
                "zero denominator in {text:?}"
            )));
        }
        return Ok(Rational::new(num, den));
    }
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(i) => {
            let e: i32 = t[i + 1..].parse().map_err(|_| bad())?;
            (&t[..i], e)
        }
        None => (t, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part
            .chars()
            .chain(frac_part.chars())
            .all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let all: BigInt = format!("{int_part}{frac_part}")
        .parse()
        .map_err(|_| bad())?;
    let ten = BigInt::from(10);
    let scale = exponent - frac_part.len() as i32;
    let mut value = Rational::from_integer(all);
    if scale >= 0 {
        value *= Rational::from_integer(Pow::pow(&ten, scale as u32));
    } else {
        value /= Rational::from_integer(Pow::pow(&ten, (-scale) as u32));
    }
    Ok(if negative { -value } else { value })
}

fn parse_f64(text: &str) -> crate::Result<f64> {
    Ok(rational_to_f64(&parse_rational(text)?))
}

fn read_input(path: &PathBuf) -> CliResult<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s)
            .map_err(|e| CliError::input(format!("reading stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("reading {}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output types serialize");
    s.push('\n');
    s
}

// ---------------------------------------------------------------- verify

const THETAS: [(i64, i64); 7] = [(-1, 1), (-1, 2), (0, 1), (1, 2), (1, 1), (3, 2), (2, 1)];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteResult {
    pub name: String,
    pub checked: u32,
    pub failed: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseFailure {
    pub suite: String,
    pub case: u32,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyReport {
    pub seed: u64,
    pub n_list: Vec<usize>,
    #[serde(rename = "max_N")]
    pub max_order: u32,
    pub max_degree: u32,
    pub cases: u32,
    pub suites: Vec<SuiteResult>,
    pub failures: Vec<CaseFailure>,
    pub all_pass: bool,
}

struct Tally {
    suites: Vec<SuiteResult>,
    failures: Vec<CaseFailure>,
}

impl Tally {
    fn record(
        &mut self,
        suite: &str,
        case: u32,
        outcome: crate::Result<ExactPolynomial>,
        what: String,
    ) {
        let slot = match self.suites.iter_mut().find(|s| s.name == suite) {
            Some(s) => s,
            None => {
                self.suites.push(SuiteResult {
                    name: suite.into(),
                    checked: 0,
                    failed: 0,
                });
                self.suites.last_mut().expect("just pushed")
            }
        };
        slot.checked += 1;
        let detail = match outcome {
            Ok(r) if r.is_zero() => return,
            Ok(r) => format!("{what}: nonzero residual {r}"),
            Err(e) => format!("{what}: {e}"),
        };
        slot.failed += 1;
        self.failures.push(CaseFailure {
            suite: suite.into(),
            case,
            detail,
        });
    }
}

/// Runs every exact identity suite on `cases` seeded cases.
pub fn verify(args: &VerifyArgs) -> CliResult<VerifyReport> {
    if args.n_list.is_empty() || args.n_list.iter().any(|&n| n < 2) {
        return Err(CliError::input("--n-list needs dimensions ≥ 2"));
    }
    if args.max_order == 0 {
        return Err(CliError::input("--max-N must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let names = [
        "correspondence",
        "reflection",
        "commutation",
        "factorization",
        "iterated_identity",
        "cellular_round_trip",
        "cellular_annihilation",
        "cellular_idempotence",
    ];
    let mut tally = Tally {
        suites: names
            .iter()
            .map(|n| SuiteResult {
                name: n.to_string(),
                checked: 0,
                failed: 0,
            })
            .collect(),
        failures: Vec::new(),
    };
    for case in 0..args.cases {
        let n = args.n_list[rng.gen_range(0..args.n_list.len())];
        let order = rng.gen_range(1..=args.max_order);
        let (tn, td) = THETAS[rng.gen_range(0..THETAS.len())];
        let theta = ThetaParam::new(rat(tn, td));
        let degree = rng.gen_range(0..=args.max_degree);
        let u = random_polynomial(n, degree, rng.gen());
        let ctx = format!("n={n} N={order} θ={theta} deg={degree}");

        let lambda = rng.gen_range(1..=3u32);
        tally.record(
            "correspondence",
            case,
            correspondence_residual(&theta, lambda, &u),
            format!("{ctx} λ={lambda}"),
        );
        let power = rat(1, 1) + rat(2, 1) * theta.value();
        if power >= Rational::zero() && power.is_integer() {
            tally.record(
                "reflection",
                case,
                reflection_residual(&theta, &u),
                ctx.clone(),
            );
        }
        let j = rng.gen_range(1..=3u32);
        tally.record(
            "commutation",
            case,
            commutation_residual(&theta, j, &u),
            format!("{ctx} j={j}"),
        );
        tally.record(
            "factorization",
            case,
            factorization_residual(order, &u),
            ctx.clone(),
        );

        let harmonic_degree = args.max_degree.saturating_sub(2 * (order - 1));
        let v = random_polyharmonic(n, order, harmonic_degree, rng.gen());
        let dec = cellular_decompose(&v, order);
        let dec = match dec {
            Ok(d) => d,
            Err(e) => {
                tally.record("cellular_round_trip", case, Err(e), ctx.clone());
                continue;
            }
        };
        tally.record(
            "cellular_round_trip",
            case,
            Ok(&dec.reconstruct() - &v),
            ctx.clone(),
        );
        for (jj, r) in dec.annihilation_residuals().into_iter().enumerate() {
            tally.record(
                "cellular_annihilation",
                case,
                Ok(r),
                format!("{ctx} j={jj}"),
            );
        }
        let jj = rng.gen_range(0..order);
        let k = rng.gen_range(1..=order);
        tally.record(
            "iterated_identity",
            case,
            iterated_identity_residual(order, jj, k, &dec.components[jj as usize]),
            format!("{ctx} j={jj} k={k}"),
        );
        let single = m_power(&dec.components[jj as usize], jj);
        let idem = cellular_decompose(&single, order).map(|again| {
            let mut diff = ExactPolynomial::zero(n);
            for (i, w) in again.components.iter().enumerate() {
                let expected = if i as u32 == jj {
                    dec.components[i].clone()
                } else {
                    ExactPolynomial::zero(n)
                };
                diff = &diff + &(w - &expected);
            }
            diff
        });
        tally.record("cellular_idempotence", case, idem, format!("{ctx} j={jj}"));
    }
    let all_pass = tally.failures.is_empty();
    Ok(VerifyReport {
        seed: args.seed,
        n_list: args.n_list.clone(),
        max_order: args.max_order,
        max_degree: args.max_degree,
        cases: args.cases,
        suites: tally.suites,
        failures: tally.failures,
        all_pass,
    })
}

// ------------------------------------------------------------- decompose

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecomposeVerification {
    pub round_trip: String,
    pub annihilation: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecomposeOutput {
    #[serde(rename = "N")]
    pub order: u32,
    pub components: Vec<ExactPolynomial>,
    pub verification: DecomposeVerification,
}

fn zero_label(p: &ExactPolynomial) -> String {
    if p.is_zero() {
        "exact-zero".into()
    } else {
        format!("nonzero: {p}")
    }
}

pub fn decompose(args: &DecomposeArgs) -> CliResult<DecomposeOutput> {
    let text = read_input(&args.input)?;
    let u = ExactPolynomial::parse_json(&text)?;
    if args.order == 0 {
        return Err(CliError::input("--N must be at least 1"));
    }
    let dec = match cellular_decompose(&u, args.order) {
        Ok(d) => d,
        Err(Error::NotPolyharmonic { order }) => {
            let witness = laplacian_power(&u, order);
            return Err(CliError {
                code: EXIT_DOMAIN,
                message: format!(
                    "input is not {order}-harmonic; Δ^{order} u = {}",
                    witness.to_json()
                ),
            });
        }
        Err(e) => return Err(e.into()),
    };
    let verification = DecomposeVerification {
        round_trip: zero_label(&(&dec.reconstruct() - &u)),
        annihilation: dec
            .annihilation_residuals()
            .iter()
            .map(zero_label)
            .collect(),
    };
    let CellularComponents { order, components } = dec;
    Ok(DecomposeOutput {
        order,
        components,
        verification,
    })
}

// ------------------------------------------------------------- critcurve

pub fn critcurve(args: &CritcurveArgs) -> CliResult<String> {
    let p_min = parse_rational(&args.p_min)?;
    let p_max = parse_rational(&args.p_max)?;
    let step = parse_rational(&args.step)?;
    if step <= Rational::zero() {
        return Err(CliError::input("--step must be positive"));
    }
    let rows = critical_curve(args.n, args.order, &p_min, &p_max, &step)?;
    let mut buf = Vec::new();
    write_curve_csv(args.order, &rows, &mut buf)?;
    Ok(String::from_utf8(buf).expect("CSV is UTF-8"))
}

// --------------------------------------------------------------- regions

pub fn regions(args: &RegionsArgs) -> CliResult<ProfileReport> {
    let p = parse_rational(&args.p)?;
    let alpha = parse_rational(&args.alpha)?;
    Ok(CriticalProfile::new(args.n, args.order, p, Some(alpha))?.report())
}

// ------------------------------------------------------------- integrate

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegrateOutput {
    pub a: f64,
    pub b: f64,
    pub n: usize,
    pub tol: f64,
    pub closed_form: IntegralValue,
    pub numeric: Option<f64>,
    pub relative_error: Option<f64>,
    /// `ok`, `fail` or `divergent`.
    pub verdict: String,
}

pub fn integrate(args: &IntegrateArgs) -> CliResult<IntegrateOutput> {
    let comparison = compare_integral(
        parse_f64(&args.a)?,
        parse_f64(&args.b)?,
        args.n,
        parse_f64(&args.tol)?,
    )?;
    let verdict = match comparison.within_tolerance {
        Some(true) => "ok",
        Some(false) => "fail",
        None => "divergent",
    };
    let IntegralComparison {
        a,
        b,
        n,
        tol,
        closed_form,
        numeric,
        relative_error,
        ..
    } = comparison;
    Ok(IntegrateOutput {
        a,
        b,
        n,
        tol,
        closed_form,
        numeric,
        relative_error,
        verdict: verdict.into(),
    })
}

// ----------------------------------------------------------- kernelcheck

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelcheckOutput {
    pub theta: String,
    pub n: usize,
    pub points: u32,
    pub seed: u64,
    pub max_relative_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Seeded points, uniform in the ball of radius `radius`.
pub fn seeded_interior_points(n: usize, count: u32, seed: u64, radius: f64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count as usize);
    while out.len() < count as usize {
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let r2: f64 = x.iter().map(|v| v * v).sum();
        if r2 < 1.0 {
            out.push(x.iter().map(|v| v * radius).collect());
        }
    }
    out
}

/// Largest `|L_θ P_θ(x, e₁)| / |P_θ(x, e₁)|` over seeded points.
pub fn kernel_max_residual(theta: f64, n: usize, points: u32, seed: u64) -> crate::Result<f64> {
    let spec = KernelSpec::at_e1(theta, n)?;
    let mut worst = 0.0f64;
    for x in seeded_interior_points(n, points, seed, 0.95) {
        worst = worst.max(l_residual_detail(theta, &spec, &x)?.relative());
    }
    Ok(worst)
}

pub fn kernelcheck(args: &KernelcheckArgs) -> CliResult<KernelcheckOutput> {
    let theta = parse_rational(&args.theta)?;
    let worst = kernel_max_residual(rational_to_f64(&theta), args.n, args.points, args.seed)?;
    Ok(KernelcheckOutput {
        theta: theta.to_string(),
        n: args.n,
        points: args.points,
        seed: args.seed,
        max_relative_residual: worst,
        tolerance: KERNEL_TOLERANCE,
        pass: worst <= KERNEL_TOLERANCE,
    })
}

// ---------------------------------------------------------------- hyp2f1

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Hyp2f1Output {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub z: f64,
    pub value: f64,
    pub terminating: bool,
}

pub fn hyp2f1_cmd(args: &Hyp2f1Args) -> CliResult<Hyp2f1Output> {
    let (a, b, c, z) = (
        parse_f64(&args.a)?,
        parse_f64(&args.b)?,
        parse_f64(&args.c)?,
        parse_f64(&args.z)?,
    );
    let params = Hyp2F1Params::new(a, b, c, z);
    let terminating = params.terminating_degree().is_some();
    let value = hyp2f1(&params, HYP2F1_TOL)?;
    Ok(Hyp2f1Output {
        a,
        b,
        c,
        z,
        value,
        terminating,
    })
}

// ------------------------------------------------------------------ norm

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormOutput {
    pub integrand: String,
    pub n: usize,
    pub p: f64,
    pub alpha: f64,
    pub levels: Vec<u32>,
    pub radii: Vec<f64>,
    pub truncated: Vec<f64>,
    pub verdict: Verdict,
}

pub fn norm(args: &NormArgs) -> CliResult<NormOutput> {
    let p = parse_f64(&args.p)?;
    let alpha = parse_f64(&args.alpha)?;
    let levels = args
        .levels
        .clone()
        .unwrap_or_else(|| DEFAULT_NORM_LEVELS.to_vec());
    let (field, label): (Box<dyn JetField>, String) = match (&args.input, &args.u) {
        (Some(path), None) => {
            let u = ExactPolynomial::parse_json(&read_input(path)?)?;
            let label = u.to_string();
            (Box::new(PolynomialField(u)), label)
        }
        (None, Some(ju)) => {
            if ju.len() != 2 {
                return Err(CliError::input("--u takes `j,N`"));
            }
            let n = args.n.ok_or_else(|| CliError::input("--u needs --n"))?;
            (
                Box::new(UField::new(ju[0], ju[1], n)?),
                format!("U_{{{},{}}}", ju[0], ju[1]),
            )
        }
        _ => return Err(CliError::input("give exactly one of --in or --u")),
    };
    let n = field.dimension();
    let eval = |x: &[f64]| field.value(x);
    let report = weighted_norm(&WeightedNormRequest::new(&eval, n, p, alpha).with_levels(levels))?;
    Ok(NormOutput {
        integrand: label,
        n,
        p,
        alpha,
        levels: report.levels,
        radii: report.radii,
        truncated: report.truncated,
        verdict: report.verdict,
    })
}

// ------------------------------------------------------------------ main

/// Output of one subcommand: the text and the artifact file name.
pub struct Rendered {
    pub text: String,
    pub file_name: &'static str,
    pub code: i32,
}

pub fn execute(cli: &Cli) -> CliResult<Rendered> {
    let json = |text: String, file_name, code| Rendered {
        text,
        file_name,
        code,
    };
    Ok(match &cli.command {
        Command::Verify(a) => {
            let r = verify(a)?;
            let code = if r.all_pass { EXIT_OK } else { EXIT_TOLERANCE };
            json(to_json(&r), "verify.json", code)
        }
        Command::Decompose(a) => json(to_json(&decompose(a)?), "decompose.json", EXIT_OK),
        Command::Critcurve(a) => json(critcurve(a)?, "critcurve.csv", EXIT_OK),
        Command::Regions(a) => json(to_json(&regions(a)?), "regions.json", EXIT_OK),
        Command::Integrate(a) => {
            let r = integrate(a)?;
            let code = if r.verdict == "fail" {
                EXIT_TOLERANCE
            } else {
                EXIT_OK
            };
            json(to_json(&r), "integrate.json", code)
        }
        Command::Kernelcheck(a) => {
            let r = kernelcheck(a)?;
            let code = if r.pass { EXIT_OK } else { EXIT_TOLERANCE };
            json(to_json(&r), "kernelcheck.json", code)
        }
        Command::Hyp2f1(a) => json(to_json(&hyp2f1_cmd(a)?), "hyp2f1.json", EXIT_OK),
        Command::Norm(a) => json(to_json(&norm(a)?), "norm.json", EXIT_OK),
    })
}

/// Parses arguments, runs the subcommand and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            if code == EXIT_OK {
                let _ = write!(stdout, "{e}");
            } else {
                let _ = write!(stderr, "{e}");
            }
            return code;
        }
    };
    match execute(&cli) {
        Ok(r) => {
            if let Some(dir) = std::env::var_os(OUT_ENV) {
                let path = PathBuf::from(dir).join(r.file_name);
                if let Err(e) = std::fs::write(&path, &r.text) {
                    let _ = writeln!(stderr, "error: writing {}: {e}", path.display());
                    return EXIT_INPUT;
                }
            }
            if stdout.write_all(r.text.as_bytes()).is_err() {
                return EXIT_INPUT;
            }
            r.code
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message);
            e.code
        }
    }
}
