//! Critical exponents of polyharmonic integrability.
//!
//! All quantities are exact rationals. For `n ≥ 3` the critical curve
//! `β(N, p)` is only characterized for `p ≥ (n-2)/(n-1)`; below that threshold
//! the functions here answer [`Membership::Unknown`] or an
//! [`Error::OutOfRange`] instead of extrapolating.

use std::io::Write;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactpoly::{int, rat, rational_to_f64, Rational};

fn check_basic(n: usize, order: u32, p: &Rational) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidDimension(n));
    }
    if order == 0 {
        return Err(Error::InvalidParameter("N must be at least 1".into()));
    }
    if !p.is_positive() {
        return Err(Error::InvalidParameter(format!(
            "p must be positive, got {p}"
        )));
    }
    Ok(())
}

/// Lower end of the range of `p` where `β(N, p)` is known: `(n-2)/(n-1)`,
/// which is `0` for `n = 2` (where every `p > 0` is allowed).
pub fn validity_threshold(n: usize) -> Rational {
    rat(n as i64 - 2, n as i64 - 1)
}

pub fn in_valid_range(n: usize, p: &Rational) -> bool {
    p.is_positive() && *p >= validity_threshold(n)
}

fn require_valid_range(n: usize, p: &Rational) -> Result<()> {
    if !in_valid_range(n, p) {
        return Err(Error::OutOfRange(format!(
            "p = {p} is below (n-2)/(n-1) = {} for n = {n}",
            validity_threshold(n)
        )));
    }
    Ok(())
}

/// `b_{0,N}(p) = -1-(N-1)p` and, for `1 ≤ j ≤ N`,
/// `b_{j,N}(p) = max{-1-(N+j-1)p, -n-(N-j-n+1)p}`.
pub fn b_jn(j: u32, order: u32, p: &Rational, n: usize) -> Result<Rational> {
    check_basic(n, order, p)?;
    if j > order {
        return Err(Error::OutOfRange(format!("j = {j} exceeds N = {order}")));
    }
    let (nn, jj, ni) = (order as i64, j as i64, n as i64);
    let first = -int(1) - int(nn + jj - 1) * p;
    if j == 0 {
        return Ok(-int(1) - int(nn - 1) * p);
    }
    let second = -int(ni) - int(nn - jj - ni + 1) * p;
    Ok(first.max(second))
}

/// `a_{j,N}(p) = min{b_{j,N}(p), -1-(N-j)p}` for `1 ≤ j ≤ N`.
pub fn a_jn(j: u32, order: u32, p: &Rational, n: usize) -> Result<Rational> {
    if j == 0 {
        return Err(Error::OutOfRange("a_{j,N} requires j ≥ 1".into()));
    }
    let b = b_jn(j, order, p, n)?;
    let other = -int(1) - int(order as i64 - j as i64) * p;
    Ok(b.min(other))
}

/// `min_{0≤j≤N} b_{j,N}(p)` without range checks.
fn beta_min_formula(order: u32, p: &Rational, n: usize) -> Result<Rational> {
    let mut best = b_jn(0, order, p, n)?;
    for j in 1..=order {
        best = best.min(b_jn(j, order, p, n)?);
    }
    Ok(best)
}

/// The critical exponent `β(N, p) = min_j b_{j,N}(p)`.
///
/// For `n ≥ 3` the result is checked against [`beta_piecewise`].
pub fn beta_critical(order: u32, p: &Rational, n: usize) -> Result<Rational> {
    check_basic(n, order, p)?;
    require_valid_range(n, p)?;
    let beta = beta_min_formula(order, p, n)?;
    if n >= 3 {
        let piecewise = beta_piecewise(order, p, n)?;
        assert_eq!(beta, piecewise, "min formula and piecewise form disagree");
    }
    Ok(beta)
}

/// Which affine piece of `β(N, ·)` contains `p` (for `n ≥ 3`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BetaBranch {
    /// `(n-2)/(n-1) ≤ p < (n-1)/n`: `β = -1-Np`.
    Low,
    /// `(n-1)/n ≤ p < 1`: `β = -n-(N-n)p`.
    Middle,
    /// `p ≥ 1`: `β = -1-(N-1)p`.
    High,
}

pub fn beta_branch(p: &Rational, n: usize) -> Result<BetaBranch> {
    if n < 3 {
        return Err(Error::Domain(
            "the piecewise form is stated for n ≥ 3".into(),
        ));
    }
    require_valid_range(n, p)?;
    Ok(if *p < rat(n as i64 - 1, n as i64) {
        BetaBranch::Low
    } else if *p < int(1) {
        BetaBranch::Middle
    } else {
        BetaBranch::High
    })
}

/// The piecewise affine form of `β(N, p)` for `n ≥ 3`.
pub fn beta_piecewise(order: u32, p: &Rational, n: usize) -> Result<Rational> {
    check_basic(n, order, p)?;
    let (nn, ni) = (order as i64, n as i64);
    Ok(match beta_branch(p, n)? {
        BetaBranch::Low => -int(1) - int(nn) * p,
        BetaBranch::Middle => -int(ni) - int(nn - ni) * p,
        BetaBranch::High => -int(1) - int(nn - 1) * p,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    Member,
    NotMember,
    Unknown,
}

/// Whether `(p, α)` lies in the admissible region, i.e. `α > β(N, p)`.
pub fn admissible(p: &Rational, alpha: &Rational, order: u32, n: usize) -> Result<Membership> {
    check_basic(n, order, p)?;
    if !in_valid_range(n, p) {
        return Ok(Membership::Unknown);
    }
    Ok(if *alpha > beta_critical(order, p, n)? {
        Membership::Member
    } else {
        Membership::NotMember
    })
}

fn require_admissible(p: &Rational, alpha: &Rational, order: u32, n: usize) -> Result<()> {
    match admissible(p, alpha, order, n)? {
        Membership::Member => Ok(()),
        Membership::NotMember => Err(Error::Domain(format!(
            "(p, α) = ({p}, {alpha}) is outside the admissible region for N = {order}, n = {n}"
        ))),
        Membership::Unknown => require_valid_range(n, p),
    }
}

/// `J(p, α) = {j ∈ {0,…,N-1} : α > a_{N-j,N}(p)}`, in increasing order.
pub fn j_set(p: &Rational, alpha: &Rational, order: u32, n: usize) -> Result<Vec<u32>> {
    require_admissible(p, alpha, order, n)?;
    let mut out = Vec::new();
    for j in 0..order {
        if *alpha > a_jn(order - j, order, p, n)? {
            out.push(j);
        }
    }
    Ok(out)
}

/// `U_{j,N} ∈ L^p_α` if and only if `α > b_{j,N}(p)`.
pub fn u_membership(j: u32, order: u32, p: &Rational, alpha: &Rational, n: usize) -> Result<bool> {
    Ok(*alpha > b_jn(j, order, p, n)?)
}

/// Threshold `min{-n-(N-n-1)p, -1-(N-2)p}` of the principal cell.
pub fn principal_threshold(order: u32, p: &Rational, n: usize) -> Result<Rational> {
    check_basic(n, order, p)?;
    require_valid_range(n, p)?;
    let (nn, ni) = (order as i64, n as i64);
    let first = -int(ni) - int(nn - ni - 1) * p;
    let second = -int(1) - int(nn - 2) * p;
    Ok(first.min(second))
}

/// `α ≤ min{-n-(N-n-1)p, -1-(N-2)p}`.
pub fn principal_cell(p: &Rational, alpha: &Rational, order: u32, n: usize) -> Result<bool> {
    Ok(*alpha <= principal_threshold(order, p, n)?)
}

/// The entangled region for `n = 2`: `0 < p < 1/3` and `α ≤ -1-Np`,
/// for admissible `(p, α)`.
pub fn entangled_n2(p: &Rational, alpha: &Rational, order: u32) -> Result<bool> {
    require_admissible(p, alpha, order, 2)?;
    Ok(*p < rat(1, 3) && *alpha <= -int(1) - int(order as i64) * p)
}

/// [`entangled_n2`] with an explicit dimension; other dimensions are an
/// error because the region is not known there.
pub fn entangled(p: &Rational, alpha: &Rational, order: u32, n: usize) -> Result<bool> {
    if n != 2 {
        return Err(Error::Domain(format!(
            "the entangled region is only described for n = 2, got n = {n}"
        )));
    }
    entangled_n2(p, alpha, order)
}

/// Parameters of the exponent calculus, with every derived quantity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalProfile {
    pub n: usize,
    pub order: u32,
    pub p: Rational,
    pub alpha: Option<Rational>,
}

/// Everything [`CriticalProfile::report`] computes, with `None` where the
/// quantity is unknown or undefined.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileReport {
    pub n: usize,
    #[serde(rename = "N")]
    pub order: u32,
    pub p: String,
    pub alpha: Option<String>,
    pub in_valid_range: bool,
    pub b: Vec<String>,
    pub a: Vec<String>,
    pub beta: Option<String>,
    /// `None` when α is absent or `p` is outside the characterized range.
    pub admissible: Option<bool>,
    #[serde(rename = "J")]
    pub j_set: Option<Vec<u32>>,
    pub u_membership: Option<Vec<bool>>,
    pub principal_cell: Option<bool>,
    pub entangled: Option<bool>,
}

impl CriticalProfile {
    pub fn new(n: usize, order: u32, p: Rational, alpha: Option<Rational>) -> Result<Self> {
        check_basic(n, order, &p)?;
        Ok(CriticalProfile { n, order, p, alpha })
    }

    pub fn b(&self) -> Vec<Rational> {
        (0..=self.order)
            .map(|j| b_jn(j, self.order, &self.p, self.n).expect("validated profile"))
            .collect()
    }

    pub fn a(&self) -> Vec<Rational> {
        (1..=self.order)
            .map(|j| a_jn(j, self.order, &self.p, self.n).expect("validated profile"))
            .collect()
    }

    pub fn beta(&self) -> Result<Rational> {
        beta_critical(self.order, &self.p, self.n)
    }

    pub fn report(&self) -> ProfileReport {
        let (n, order, p) = (self.n, self.order, &self.p);
        let valid = in_valid_range(n, p);
        let beta = valid.then(|| beta_critical(order, p, n).expect("valid range"));
        let alpha = self.alpha.as_ref();
        let admissible =
            alpha.and_then(
                |a| match admissible(p, a, order, n).expect("validated profile") {
                    Membership::Member => Some(true),
                    Membership::NotMember => Some(false),
                    Membership::Unknown => None,
                },
            );
        let j = alpha.and_then(|a| j_set(p, a, order, n).ok());
        let u = alpha.map(|a| {
            (0..=order)
                .map(|j| u_membership(j, order, p, a, n).expect("validated profile"))
                .collect()
        });
        let principal = alpha.and_then(|a| principal_cell(p, a, order, n).ok());
        let entangled = alpha.and_then(|a| entangled(p, a, order, n).ok());
        ProfileReport {
            n,
            order,
            p: p.to_string(),
            alpha: alpha.map(|a| a.to_string()),
            in_valid_range: valid,
            b: self.b().iter().map(|v| v.to_string()).collect(),
            a: self.a().iter().map(|v| v.to_string()).collect(),
            beta: beta.map(|b| b.to_string()),
            admissible,
            j_set: j,
            u_membership: u,
            principal_cell: principal,
            entangled,
        }
    }
}

/// One row of the critical-curve table.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveRow {
    pub p: Rational,
    pub b: Vec<Rational>,
    pub a: Vec<Rational>,
    pub beta: Option<Rational>,
    pub branch: Option<BetaBranch>,
    pub entangled_window: bool,
}

/// Samples `p_min, p_min + step, …` up to and including `p_max`.
pub fn critical_curve(
    n: usize,
    order: u32,
    p_min: &Rational,
    p_max: &Rational,
    step: &Rational,
) -> Result<Vec<CurveRow>> {
    if !step.is_positive() {
        return Err(Error::InvalidParameter(format!(
            "step must be positive, got {step}"
        )));
    }
    if p_max < p_min {
        return Err(Error::InvalidParameter("p-max is below p-min".into()));
    }
    check_basic(n, order, p_min)?;
    let mut rows = Vec::new();
    let mut k = Rational::zero();
    loop {
        let p = p_min + &k * step;
        if p > *p_max {
            break;
        }
        let profile = CriticalProfile::new(n, order, p.clone(), None)?;
        let valid = in_valid_range(n, &p);
        rows.push(CurveRow {
            b: profile.b(),
            a: profile.a(),
            beta: if valid { Some(profile.beta()?) } else { None },
            branch: if valid && n >= 3 {
                Some(beta_branch(&p, n)?)
            } else {
                None
            },
            entangled_window: n == 2 && p < rat(1, 3),
            p,
        });
        k += Rational::one();
    }
    Ok(rows)
}

/// CSV header for [`write_curve_csv`].
pub fn curve_header(order: u32) -> Vec<String> {
    let mut h = vec!["p".to_string()];
    h.extend((0..=order).map(|j| format!("b_{j}")));
    h.extend((1..=order).map(|j| format!("a_{j}")));
    h.extend(["beta", "valid", "branch", "entangled_window"].map(String::from));
    h
}

/// Writes rows as CSV with floats in shortest round-trip form; `beta` reads
/// `unknown` outside the valid range.
pub fn write_curve_csv<W: Write>(order: u32, rows: &[CurveRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Evaluation(e.to_string());
    w.write_record(curve_header(order)).map_err(io)?;
    for row in rows {
        let mut rec = vec![rational_to_f64(&row.p).to_string()];
        rec.extend(
            row.b
                .iter()
                .chain(&row.a)
                .map(|v| rational_to_f64(v).to_string()),
        );
        rec.push(match &row.beta {
            Some(b) => rational_to_f64(b).to_string(),
            None => "unknown".into(),
        });
        rec.push(row.beta.is_some().to_string());
        rec.push(match row.branch {
            Some(BetaBranch::Low) => "low".into(),
            Some(BetaBranch::Middle) => "middle".into(),
            Some(BetaBranch::High) => "high".into(),
            None => String::new(),
        });
        rec.push(row.entangled_window.to_string());
        w.write_record(&rec).map_err(io)?;
    }
    w.flush().map_err(|e| Error::Evaluation(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn b_examples() {
        for p in [rat(1, 3), int(1), int(4)] {
            assert_eq!(b_jn(0, 1, &p, 3).unwrap(), int(-1));
        }
        assert_eq!(b_jn(1, 1, &rat(1, 2), 3).unwrap(), rat(-3, 2));
        assert_eq!(b_jn(2, 2, &int(1), 3).unwrap(), int(-1));
        assert!(b_jn(3, 2, &int(1), 3).is_err());
        assert!(b_jn(0, 2, &int(0), 3).is_err());
    }

    #[test]
    fn a_examples() {
        assert_eq!(a_jn(2, 2, &int(1), 3).unwrap(), int(-1));
        assert_eq!(a_jn(1, 2, &int(1), 3).unwrap(), int(-2));
        let p = rat(1, 2);
        for order in 1..=4 {
            for j in 1..=order {
                assert_eq!(
                    a_jn(j, order, &p, 3).unwrap(),
                    b_jn(j, order, &p, 3).unwrap()
                );
            }
        }
        assert!(a_jn(0, 2, &p, 3).is_err());
    }

    #[test]
    fn beta_examples() {
        assert_eq!(beta_critical(2, &int(1), 3).unwrap(), int(-2));
        assert_eq!(beta_critical(1, &rat(1, 2), 3).unwrap(), rat(-3, 2));
        assert_eq!(beta_critical(3, &rat(5, 6), 3).unwrap(), int(-3));
        assert_eq!(beta_branch(&rat(5, 6), 3).unwrap(), BetaBranch::Middle);
        assert!(matches!(
            beta_critical(1, &rat(1, 5), 3),
            Err(Error::OutOfRange(_))
        ));
        // n = 2 accepts every positive p
        assert!(beta_critical(3, &rat(1, 1000), 2).is_ok());
    }

    #[test]
    fn admissibility() {
        assert_eq!(
            admissible(&rat(1, 5), &int(0), 1, 3).unwrap(),
            Membership::Unknown
        );
        assert_eq!(
            admissible(&int(1), &rat(-3, 2), 2, 3).unwrap(),
            Membership::Member
        );
        assert_eq!(
            admissible(&int(1), &int(-2), 2, 3).unwrap(),
            Membership::NotMember
        );
        for k in 1..50 {
            let p = rat(k, 10);
            assert_ne!(admissible(&p, &int(-1), 2, 2).unwrap(), Membership::Unknown);
        }
    }

    #[test]
    fn j_set_examples() {
        assert_eq!(j_set(&int(1), &rat(-3, 2), 2, 3).unwrap(), vec![1]);
        assert_eq!(j_set(&int(1), &int(10), 3, 3).unwrap(), vec![0, 1, 2]);
        // α exactly at a_{2,2}(1) = -1 excludes j = 0
        assert_eq!(j_set(&int(1), &int(-1), 2, 3).unwrap(), vec![1]);
        assert!(j_set(&int(1), &int(-3), 2, 3).is_err());
    }

    #[test]
    fn membership_examples() {
        let p = int(1);
        let b = b_jn(1, 2, &p, 3).unwrap();
        assert!(!u_membership(1, 2, &p, &b, 3).unwrap());
        assert!(u_membership(1, 2, &p, &rat(-17, 10), 3).unwrap());
        // j = 0: (N-1)p + α > -1
        let (order, p) = (3, rat(2, 3));
        for k in -40..40 {
            let alpha = rat(k, 10);
            let expected = int(order as i64 - 1) * &p + &alpha > int(-1);
            assert_eq!(u_membership(0, order, &p, &alpha, 3).unwrap(), expected);
        }
    }

    #[test]
    fn principal_cell_examples() {
        assert_eq!(principal_threshold(2, &int(1), 3).unwrap(), int(-1));
        assert!(principal_cell(&int(1), &rat(-6, 5), 2, 3).unwrap());
        assert!(principal_cell(&int(1), &int(-1), 2, 3).unwrap());
        assert!(!principal_cell(&int(1), &rat(-99, 100), 2, 3).unwrap());
        assert!(principal_cell(&int(1), &int(-5), 1, 3).is_ok());
        assert!(principal_cell(&rat(1, 5), &int(-5), 2, 3).is_err());
    }

    #[test]
    fn entangled_examples() {
        let order = 2;
        assert!(!entangled_n2(&rat(1, 2), &rat(-19, 10), order).unwrap());
        let p = rat(1, 4);
        let alpha = -int(1) - int(order as i64) * &p - rat(1, 10);
        assert_eq!(
            admissible(&p, &alpha, order, 2).unwrap(),
            Membership::Member
        );
        assert!(entangled_n2(&p, &alpha, order).unwrap());
        assert!(!entangled_n2(&p, &rat(-1, 1), order).unwrap());
        assert!(entangled(&p, &alpha, order, 3).is_err());
    }

    #[test]
    fn curve_rows_and_csv() {
        let rows = critical_curve(3, 2, &rat(1, 2), &int(2), &rat(1, 6)).unwrap();
        assert_eq!(rows.len(), 10);
        assert_eq!(rows[0].branch, Some(BetaBranch::Low));
        assert_eq!(rows[1].branch, Some(BetaBranch::Middle));
        assert_eq!(rows[3].branch, Some(BetaBranch::High));
        let mut buf = Vec::new();
        write_curve_csv(2, &rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("p,b_0,b_1,b_2,a_1,a_2,beta,valid,branch,entangled_window\n"));
        assert!(critical_curve(3, 2, &int(1), &int(2), &int(0)).is_err());
        let below = critical_curve(3, 1, &rat(1, 10), &rat(1, 5), &rat(1, 10)).unwrap();
        assert!(below.iter().all(|r| r.beta.is_none()));
    }

    #[test]
    fn report_serializes() {
        let prof = CriticalProfile::new(3, 2, int(1), Some(rat(-3, 2))).unwrap();
        let r = prof.report();
        assert_eq!(r.j_set, Some(vec![1]));
        assert_eq!(r.admissible, Some(true));
        let text = serde_json::to_string(&r).unwrap();
        let back: ProfileReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
    }
}
