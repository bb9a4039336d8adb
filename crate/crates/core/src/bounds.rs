//! Closed-form bounds: the norm-growth factor `k(b, delta)`, two-sided
//! bounds on `b_max(n)`, the extra lower bound for `t_M([0, b])`, the
//! Farey-interval scan and a bound profile for `t_M([0, x])`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use crate::enclosure::{RealEnclosure, DEFAULT_PRECISION};
use crate::error::{Error, Result};
use crate::poly::IntPolynomial;
use crate::rational::{self, int, rat, Rational};
use crate::realanalysis::WeightedProduct;

/// `k(b, delta) = 2 (delta/b) (1 + sqrt(1 + b/delta))`, the factor with
/// `||p||_[0,b+delta] <= (1 + k)^n ||p||_[0,b]` for monic `p` of degree `n`.
pub fn k_factor(b: &Rational, delta: &Rational) -> Result<RealEnclosure> {
    k_factor_with_precision(b, delta, DEFAULT_PRECISION)
}

pub fn k_factor_with_precision(b: &Rational, delta: &Rational, prec: u32) -> Result<RealEnclosure> {
    if !b.is_positive() || !delta.is_positive() {
        return Err(Error::InvalidArgument(format!("k_factor needs b > 0 and delta > 0, got {b}, {delta}")));
    }
    let root = RealEnclosure::sqrt_rational(&(Rational::one() + b / delta), prec)?;
    let one = RealEnclosure::from_int(1, prec);
    Ok(root.add(&one).mul_rational(&(int(2) * delta / b)))
}

/// Bounds on `b_max(n)`, the right end of the plateau `t_M([0, b]) = 1/n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BmaxBounds {
    pub n: u32,
    #[serde(with = "rational::as_string")]
    pub lower: Rational,
    #[serde(with = "rational::as_string")]
    pub upper: Rational,
    /// Whether `lower` itself is attained (`<=`) rather than strict (`<`).
    pub lower_inclusive: bool,
    /// Whether `upper` itself may be attained.
    pub upper_inclusive: bool,
}

/// `1/n + 1/(n^2 (n-1)) < b_max(n) <= 4n/(2n-1)^2` for `n > 2`; for `n = 2`
/// the published interval `[1.26, 1.328)`.
pub fn bmax_bounds(n: u32) -> Result<BmaxBounds> {
    match n {
        0 | 1 => Err(Error::InvalidArgument(format!("b_max({n}) is not finite"))),
        2 => Ok(BmaxBounds {
            n,
            lower: rat(63, 50),
            upper: rat(166, 125),
            lower_inclusive: true,
            upper_inclusive: false,
        }),
        _ => {
            let m = int(n as i64);
            let lower = m.recip() + (&m * &m * (&m - int(1))).recip();
            let two_m1 = int(2) * &m - int(1);
            let upper = int(4) * &m / (&two_m1 * &two_m1);
            Ok(BmaxBounds { n, lower, upper, lower_inclusive: false, upper_inclusive: true })
        }
    }
}

/// `P_n = x^(n^2 - 2) (x^2 - n x + 1)`.
pub fn pn_family(n: u32) -> Result<WeightedProduct> {
    if n <= 2 {
        return Err(Error::InvalidArgument(format!("P_n needs n > 2, got {n}")));
    }
    let e = (n as u64) * (n as u64) - 2;
    WeightedProduct::new(vec![
        (IntPolynomial::x(), e),
        (IntPolynomial::from_i64s(&[1, -(n as i64), 1]), 1),
    ])
}

/// Exact value of `P_n(x)`.
pub fn pn_eval(n: u32, x: &Rational) -> Rational {
    let m = int(n as i64);
    let quad = x * x - &m * x + int(1);
    Pow::pow(x, n * n - 2) * quad
}

/// Outcome of the two rational inequalities used for the `b_max` lower
/// bound at one `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InequalityCheck {
    pub n: u32,
    /// `((n^2-n)/(n^2-n+1))^(n^2) >= (2/3)^4`
    pub sequence_bound: bool,
    /// `(2/3)^4 > (n^3-3n^2+2n-1)/(n^2-n+1)^2`
    pub rational_function_bound: bool,
    /// The sequence term at `n` exceeds the one at `n - 1` (checked for `n > 3`).
    pub increasing: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InequalityReport {
    pub checks: Vec<InequalityCheck>,
    pub violations: Vec<u32>,
}

fn sequence_term(n: u32) -> Rational {
    let m = BigInt::from(n);
    let a = &m * &m - &m;
    Pow::pow(Rational::new(a.clone(), a + 1), n * n)
}

/// Checks both inequalities exactly for `3 <= n <= n_max`, along with the
/// monotonicity of the sequence.
pub fn theorem5_inequalities(n_max: u32) -> Result<InequalityReport> {
    if n_max < 3 {
        return Err(Error::InvalidArgument(format!("n_max must be >= 3, got {n_max}")));
    }
    let target = Pow::pow(rat(2, 3), 4u32);
    let checks: Vec<InequalityCheck> = (3..=n_max)
        .into_par_iter()
        .map(|n| {
            let s = sequence_term(n);
            let m = int(n as i64);
            let den = &m * &m - &m + int(1);
            let rf = (&m * &m * &m - int(3) * &m * &m + int(2) * &m - int(1)) / (&den * &den);
            let increasing = n == 3 || s > sequence_term(n - 1);
            InequalityCheck {
                n,
                sequence_bound: s >= target,
                rational_function_bound: target > rf,
                increasing,
            }
        })
        .collect();
    let violations = checks
        .iter()
        .filter(|c| !(c.sequence_bound && c.rational_function_bound && c.increasing))
        .map(|c| c.n)
        .collect();
    Ok(InequalityReport { checks, violations })
}

/// `delta_min(n) = 1/(4n^3 - 8n^2 + 5n - 1)`.
pub fn delta_min(n: u32) -> Result<Rational> {
    if n <= 2 {
        return Err(Error::InvalidArgument(format!("delta_min needs n > 2, got {n}")));
    }
    let m = BigInt::from(n);
    let d = BigInt::from(4) * &m * &m * &m - BigInt::from(8) * &m * &m + BigInt::from(5) * &m - 1;
    Ok(Rational::new(BigInt::one(), d))
}

/// The largest `n` with `1/n > b`, for `0 < b < 1`.
pub fn plateau_index(b: &Rational) -> u32 {
    // 1/n > b  <=>  n < 1/b.
    let inv = b.recip();
    let n = if inv.is_integer() { inv.to_integer() - 1 } else { inv.floor().to_integer() };
    n.to_u32().unwrap_or(u32::MAX)
}

/// Lower bound for `t_M([0, b])`: with `n` the largest integer such that
/// `1/n > b`, `max{1/(n+1), b/(2(1 + sqrt(1 - nb)) - nb)}`.
///
/// For `1/2 <= b < 1` (`n = 1`) only `1/2` is returned: the second branch
/// would exceed `t_M([0, 1]) = 1/2`.
pub fn extra_lower_bound(b: &Rational) -> Result<RealEnclosure> {
    extra_lower_bound_with_precision(b, DEFAULT_PRECISION)
}

pub fn extra_lower_bound_with_precision(b: &Rational, prec: u32) -> Result<RealEnclosure> {
    if !b.is_positive() || b >= &int(1) {
        return Err(Error::InvalidArgument(format!("extra_lower_bound needs 0 < b < 1, got {b}")));
    }
    let n = plateau_index(b);
    let floor = RealEnclosure::from_rational(&rat(1, n as i64 + 1), prec);
    if n == 1 {
        return Ok(floor);
    }
    let nb = int(n as i64) * b;
    let root = RealEnclosure::sqrt_rational(&(int(1) - &nb), prec)?;
    let den = root
        .add(&RealEnclosure::from_int(1, prec))
        .mul_int(&BigInt::from(2))
        .sub(&RealEnclosure::from_rational(&nb, prec));
    let branch = RealEnclosure::from_rational(b, prec).div(&den)?;
    Ok(floor.max(&branch))
}

/// `k (4n^2 + 1) / (n (2n - 1)^2)`, an upper bound for the plateau end of
/// `t_M([k/n, b]) = 1/n`.
pub fn bstar_upper(n: u32, k: u32) -> Result<Rational> {
    if n < 2 || k < 1 || k >= n {
        return Err(Error::InvalidArgument(format!("bstar_upper needs n > 1 and 1 <= k < n, got n={n}, k={k}")));
    }
    let m = BigInt::from(n);
    let t = BigInt::from(2) * &m - 1;
    Ok(Rational::new(BigInt::from(k) * (BigInt::from(4) * &m * &m + 1), &m * &t * &t))
}

/// Neighbouring fractions `p/q < r/s` with `r q - p s = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FareyPair {
    pub p: i64,
    pub q: i64,
    pub r: i64,
    pub s: i64,
}

impl FareyPair {
    pub fn new(p: i64, q: i64, r: i64, s: i64) -> Result<Self> {
        if q <= 0 || s <= 0 || r * q - p * s != 1 {
            return Err(Error::InvalidArgument(format!("{p}/{q}, {r}/{s} are not Farey neighbours")));
        }
        Ok(FareyPair { p, q, r, s })
    }

    pub fn left(&self) -> Rational {
        rat(self.p, self.q)
    }

    pub fn right(&self) -> Rational {
        rat(self.r, self.s)
    }
}

/// Result of [`farey_scan_report`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FareyScan {
    pub n_max: u32,
    /// Intervals `[k/n, p/q]` enumerated.
    pub enumerated: usize,
    /// Intervals with `p/q > bstar_upper(n, k)`.
    pub flagged: Vec<FareyPair>,
    /// Every flagged case has `1 + qk = 2n` and `k = 1`.
    pub flagged_structure_ok: bool,
    /// No interval `[1/n, (1+t)/((1+t)n - 1)]` exceeds `bstar_upper(n, 1)`.
    pub family_ok: bool,
}

/// Farey intervals `[k/n, p/q]` with `q > n` whose right end exceeds the
/// `b*` bound; expected empty.
pub fn farey_scan(n_max: u32) -> Result<Vec<FareyPair>> {
    Ok(farey_scan_report(n_max)?.flagged)
}

pub fn farey_scan_report(n_max: u32) -> Result<FareyScan> {
    if n_max < 2 {
        return Err(Error::InvalidArgument(format!("n_max must be >= 2, got {n_max}")));
    }
    let per_n: Vec<(usize, Vec<FareyPair>, bool)> = (2..=n_max)
        .into_par_iter()
        .map(|n| {
            let ni = n as i64;
            let mut count = 0;
            let mut flagged = Vec::new();
            for k in 1..ni {
                if k.gcd(&ni) != 1 {
                    continue;
                }
                let bstar = bstar_upper(n, k as u32).expect("1 <= k < n");
                // 1 + qk < 2n + 1 bounds q.
                for q in (ni + 1)..=((2 * ni - 1) / k) {
                    if (1 + q * k) % ni != 0 {
                        continue;
                    }
                    let p = (1 + q * k) / ni;
                    count += 1;
                    if rat(p, q) > bstar {
                        flagged.push(FareyPair { p: k, q: ni, r: p, s: q });
                    }
                }
            }
            let family_ok = (1..=(n_max as i64 + 1)).all(|t| {
                let right = rat(1 + t, (1 + t) * ni - 1);
                right <= bstar_upper(n, 1).expect("n >= 2")
            });
            (count, flagged, family_ok)
        })
        .collect();
    let enumerated = per_n.iter().map(|x| x.0).sum();
    let family_ok = per_n.iter().all(|x| x.2);
    let flagged: Vec<FareyPair> = per_n.into_iter().flat_map(|x| x.1).collect();
    let flagged_structure_ok = flagged.iter().all(|f| f.p == 1 && 1 + f.s * f.p == 2 * f.q);
    Ok(FareyScan { n_max, enumerated, flagged, flagged_structure_ok, family_ok })
}

/// A plateau `t_M([0, x]) = 1/n` for `1/n <= x <= b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Plateau {
    pub n: u32,
    #[serde(with = "rational::as_string")]
    pub b: Rational,
}

/// One row of a `t_M([0, x])` profile.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileRow {
    pub x: Rational,
    pub lower: Rational,
    pub upper: Rational,
    pub lower_source: String,
    pub upper_source: String,
}

/// Rigorous bounds for `t_M([0, x])` on `steps + 1` equally spaced points of
/// `[x_lo, x_hi]`.
///
/// Lower bounds come from linear obstructions `n x - 1` and
/// [`extra_lower_bound`]; upper bounds from the monic `x`, monotonicity of
/// `t_M([0, x])` and the given certified plateaus.
pub fn tm_profile(x_lo: &Rational, x_hi: &Rational, steps: u32, plateaus: &[Plateau]) -> Result<Vec<ProfileRow>> {
    if !x_lo.is_positive() || x_lo >= x_hi || steps < 1 {
        return Err(Error::InvalidArgument(format!(
            "profile needs 0 < x_lo < x_hi and steps >= 1, got {x_lo}, {x_hi}, {steps}"
        )));
    }
    if x_hi >= &int(4) {
        return Err(Error::InvalidInterval(format!("[0, {x_hi}] has length >= 4")));
    }
    let h = (x_hi - x_lo) / int(steps as i64);
    (0..=steps)
        .into_par_iter()
        .map(|i| profile_point(&(x_lo + &h * int(i as i64)), plateaus))
        .collect()
}

fn profile_point(x: &Rational, plateaus: &[Plateau]) -> Result<ProfileRow> {
    // Lower: the obstruction n x - 1 with the smallest n >= 2 and 1/n <= x.
    let n_obs = x.recip().ceil().to_integer().max(BigInt::from(2));
    let mut lower = Rational::new(BigInt::one(), n_obs.clone());
    let mut lower_source = format!("obstruction:{n_obs}x-1");
    if x < &int(1) {
        let e = extra_lower_bound(x)?;
        let lo = e.lo_rational();
        if lo > lower {
            lower = lo;
            lower_source = "extra_lower_bound".into();
        }
    }

    let mut upper = x.clone();
    let mut upper_source = "monic:x".to_string();
    let mut consider = |v: Rational, tag: String| {
        if v < upper {
            upper = v;
            upper_source = tag;
        }
    };
    if x <= &int(1) {
        consider(rat(1, 2), "monotone:t_M([0,1])=1/2".into());
    }
    // t_M([0, 1/n]) = 1/n, so 1/n bounds t_M([0, x]) for x <= 1/n.
    if let Some(n) = x.recip().floor().to_integer().to_u32().filter(|n| *n >= 2) {
        consider(rat(1, n as i64), format!("monotone:t_M([0,1/{n}])=1/{n}"));
    }
    for pl in plateaus {
        if x <= &pl.b {
            consider(rat(1, pl.n as i64), format!("plateau:n={},b={}", pl.n, pl.b));
        }
    }
    Ok(ProfileRow { x: x.clone(), lower, upper, lower_source, upper_source })
}

/// Writes profile rows as CSV with columns
/// `x_decimal,lower_decimal,upper_decimal,provenance`.
pub fn write_profile_csv<W: std::io::Write>(rows: &[ProfileRow], digits: usize, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::InvalidArgument(format!("csv: {e}"));
    w.write_record(["x_decimal", "lower_decimal", "upper_decimal", "provenance"]).map_err(io)?;
    for r in rows {
        let ulp = Rational::new(BigInt::one(), num_traits::pow(BigInt::from(10), digits));
        let down = |v: &Rational| rational::to_decimal(&((v / &ulp).floor() * &ulp), digits);
        let up = |v: &Rational| rational::to_decimal(&((v / &ulp).ceil() * &ulp), digits);
        let prov = format!("lower={};upper={}", r.lower_source, r.upper_source);
        w.write_record([rational::to_decimal(&r.x, digits), down(&r.lower), up(&r.upper), prov]).map_err(io)?;
    }
    w.flush().map_err(|e| Error::InvalidArgument(format!("csv: {e}")))?;
    Ok(())
}

impl ProfileRow {
    /// Whether the bounds pin `t_M([0, x])` exactly.
    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }
}
