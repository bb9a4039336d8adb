//! Certificates that a weighted product attains `1/n` on `[0, b]`, and the
//! built-in table of attaining products for `n = 3..8`.

use std::cmp::Ordering;

use log::{debug, info};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::enclosure::{escalate, RealEnclosure};
use crate::error::{Error, Result};
use crate::poly::{resultant, IntPolynomial};
use crate::rational::{self, int, rat, Rational};
use crate::realanalysis::{log_supnorm_weighted_evidence, CandidateKind, LogMax, RatInterval, WeightedProduct};

pub const CERTIFICATE_VERSION: u32 = 1;

/// Default comparison tolerance in log units.
pub fn default_tol() -> Rational {
    rational::pow2(-64)
}

/// Default grid step for extending `b`.
pub fn default_resolution() -> Rational {
    rat(1, 10_000)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Certified,
    Refuted,
    Undecided,
}

impl Verdict {
    /// Process exit code for this verdict.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Certified => 0,
            Verdict::Refuted => 1,
            Verdict::Undecided => 3,
        }
    }
}

/// Log-sum enclosure at one candidate maximizer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evidence {
    pub kind: String,
    /// `[lo, hi]`; equal when the point is exact.
    pub point: [String; 2],
    pub logsum: [String; 2],
}

/// Why a product was refuted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Witness {
    /// A factor with `|Res(f, nx - 1)| != 1`.
    Resultant { factor: IntPolynomial, value: String },
    /// A point where the log-sum exceeds `D log(1/n) + tol`.
    Point { point: [String; 2], logsum: [String; 2] },
}

/// Machine-checkable verdict on whether `P` has `||P||^(1/D) = 1/n` on the
/// interval.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub version: u32,
    pub interval: [String; 2],
    pub n: u32,
    /// The obstruction `q = nx - 1` as `(a_d, d)`.
    pub target: (u32, u32),
    pub product: WeightedProduct,
    #[serde(rename = "D")]
    pub total_degree: u64,
    pub verdict: Verdict,
    pub evidence: Vec<Evidence>,
    /// `|Res(f_i, nx - 1)|` in factor order.
    pub resultants: Vec<String>,
    pub precision_bits: u32,
    pub tol: String,
    /// `[lo, hi]` of `D log(1/n)` at `precision_bits`.
    pub bound: [String; 2],
    /// Whether the maximum may be reached at the right endpoint, in which
    /// case the plateau claim on `[0, b)` relies on the closed endpoint.
    pub max_at_right_endpoint: bool,
    pub witness: Option<Witness>,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("certificate: {e}")))
    }

    pub fn b(&self) -> Result<Rational> {
        rational::parse_rational(&self.interval[1])
    }
}

fn pair(e: &RealEnclosure) -> [String; 2] {
    [e.lo_rational().to_string(), e.hi_rational().to_string()]
}

fn check_interval(iv: &RatInterval, n: u32) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("n = {n}: need n >= 2")));
    }
    if !iv.a().is_zero() {
        return Err(Error::InvalidInterval(format!("{iv}: left endpoint must be 0")));
    }
    let b = iv.b();
    if b < &rat(1, n as i64) || b >= &rat(1, n as i64 - 1) {
        return Err(Error::InvalidInterval(format!("{iv}: need 1/{n} <= b < 1/{}", n - 1)));
    }
    Ok(())
}

/// Exact `|f(1/n)| = n^-k`; returns `k`.
fn exact_power_at(f: &IntPolynomial, n: u32) -> Option<u32> {
    let v = f.eval_rational(&rat(1, n as i64)).abs();
    if !v.numer().is_one() {
        return None;
    }
    let mut d = v.denom().clone();
    let nb = BigInt::from(n);
    let mut k = 0;
    while d > BigInt::one() {
        if !(&d % &nb).is_zero() {
            return None;
        }
        d /= &nb;
        k += 1;
    }
    Some(k)
}

enum LogOutcome {
    Certified(LogMax, RealEnclosure),
    Refuted(LogMax, RealEnclosure, usize),
}

/// Compares the maximum against `bound + tol` at one precision; `None`
/// means undecided there.
fn compare_once(p: &WeightedProduct, iv: &RatInterval, n: u32, tol: &Rational, prec: u32) -> Option<LogOutcome> {
    let max = match log_supnorm_weighted_evidence(p, iv, prec) {
        Ok(m) => m,
        Err(e) => {
            debug!("log-sup at {prec} bits failed: {e}");
            return None;
        }
    };
    let bound = RealEnclosure::ln_rational(&rat(1, n as i64), prec)
        .ok()?
        .mul_int(&BigInt::from(p.total_degree()));
    let hi_limit = bound.hi_rational() + tol;
    let lo_limit = bound.lo_rational() + tol;
    if let Some(k) = max.candidates.iter().position(|c| c.value.lo_rational() > hi_limit) {
        return Some(LogOutcome::Refuted(max, bound, k));
    }
    if max.value.hi_rational() <= lo_limit {
        return Some(LogOutcome::Certified(max, bound));
    }
    None
}

/// Checks that `P` attains `1/n` on `I = [0, b]` with `1/n <= b < 1/(n-1)`.
///
/// Certified requires every factor to have `|Res(f_i, nx - 1)| = 1` (which
/// makes `|P(1/n)| = n^-D` exactly) and the log-sum maximum to be at most
/// `D log(1/n) + tol`. A failing resultant or a point above that bound is a
/// refutation.
pub fn verify_attaining(p: &WeightedProduct, iv: &RatInterval, n: u32, tol: &Rational) -> Result<Certificate> {
    verify_attaining_with(p, iv, n, tol, crate::enclosure::DEFAULT_PRECISION, crate::enclosure::MAX_PRECISION)
}

pub fn verify_attaining_with(
    p: &WeightedProduct,
    iv: &RatInterval,
    n: u32,
    tol: &Rational,
    prec: u32,
    max_prec: u32,
) -> Result<Certificate> {
    check_interval(iv, n)?;
    if p.is_empty() {
        return Err(Error::InvalidArgument("empty product".into()));
    }
    if tol.is_negative() {
        return Err(Error::InvalidArgument("tol must be >= 0".into()));
    }
    let q = IntPolynomial::linear(n as i64, 1);
    let resultants: Vec<BigInt> = p
        .factors()
        .iter()
        .map(|f| resultant(&f.poly, &q).map(|r| r.abs()))
        .collect::<Result<_>>()?;
    let mut cert = Certificate {
        version: CERTIFICATE_VERSION,
        interval: [iv.a().to_string(), iv.b().to_string()],
        n,
        target: (n, 1),
        product: p.clone(),
        total_degree: p.total_degree(),
        verdict: Verdict::Undecided,
        evidence: Vec::new(),
        resultants: resultants.iter().map(|r| r.to_string()).collect(),
        precision_bits: prec,
        tol: tol.to_string(),
        bound: pair(&RealEnclosure::ln_rational(&rat(1, n as i64), prec)?.mul_int(&BigInt::from(p.total_degree()))),
        max_at_right_endpoint: false,
        witness: None,
    };
    if let Some((f, r)) = p.factors().iter().zip(&resultants).find(|(_, r)| !r.is_one()) {
        cert.verdict = Verdict::Refuted;
        cert.witness = Some(Witness::Resultant { factor: f.poly.clone(), value: r.to_string() });
        return Ok(cert);
    }
    // Unit resultants force |f_i(1/n)| = n^-deg f_i.
    let attained: u64 = p
        .factors()
        .iter()
        .map(|f| exact_power_at(&f.poly, n).map(|k| k as u64 * f.exp))
        .sum::<Option<u64>>()
        .ok_or_else(|| Error::Degenerate("factor value at 1/n is not a power of 1/n".into()))?;
    if attained != p.total_degree() {
        return Err(Error::Degenerate("attained degree differs from D".into()));
    }

    match escalate(prec, max_prec, |bits| compare_once(p, iv, n, tol, bits).map(|o| (o, bits))) {
        Ok(((outcome, bits), _)) => {
            cert.precision_bits = bits;
            let (max, bound, refuted_at) = match outcome {
                LogOutcome::Certified(m, b) => (m, b, None),
                LogOutcome::Refuted(m, b, k) => (m, b, Some(k)),
            };
            cert.bound = pair(&bound);
            cert.evidence = max
                .candidates
                .iter()
                .map(|c| Evidence {
                    kind: match c.kind {
                        CandidateKind::Endpoint => "endpoint".into(),
                        CandidateKind::Critical => "critical".into(),
                    },
                    point: [c.point.lo.to_string(), c.point.hi.to_string()],
                    logsum: pair(&c.value),
                })
                .collect();
            let right = max.candidates.iter().find(|c| c.point.lo == *iv.b() && c.point.is_exact());
            cert.max_at_right_endpoint =
                right.is_some_and(|c| c.value.hi_rational() >= bound.lo_rational() - tol);
            match refuted_at {
                None => cert.verdict = Verdict::Certified,
                Some(k) => {
                    let c = &max.candidates[k];
                    cert.verdict = Verdict::Refuted;
                    cert.witness = Some(Witness::Point {
                        point: [c.point.lo.to_string(), c.point.hi.to_string()],
                        logsum: pair(&c.value),
                    });
                }
            }
        }
        Err(bits) => {
            cert.precision_bits = bits;
            cert.verdict = Verdict::Undecided;
        }
    }
    Ok(cert)
}

/// Re-derives the verdict of a certificate without the search machinery:
/// resultants by exact evaluation `n^deg f * f(1/n)`, every evidence
/// enclosure recomputed at the stated precision, and the bound comparison
/// redone. Returns the recomputed verdict.
///
/// The completeness of the evidence list (that it covers every maximizer
/// candidate) is taken from the certificate.
pub fn check_certificate(c: &Certificate) -> Result<Verdict> {
    if c.version != CERTIFICATE_VERSION {
        return Err(Error::Parse(format!("unknown certificate version {}", c.version)));
    }
    let n = c.n;
    let nr = rat(1, n as i64);
    let mut values = Vec::new();
    for (f, claimed) in c.product.factors().iter().zip(&c.resultants) {
        let d = f.poly.deg0() as i32;
        let r = (f.poly.eval_rational(&nr) * Rational::from_integer(BigInt::from(n).pow(d as u32))).abs();
        if r.to_string() != *claimed {
            return Err(Error::Parse(format!("resultant mismatch for {}", f.poly)));
        }
        values.push(r);
    }
    if c.resultants.len() != c.product.factors().len() {
        return Err(Error::Parse("resultant list length".into()));
    }
    if values.iter().any(|r| !r.is_one()) {
        return Ok(Verdict::Refuted);
    }
    if c.verdict == Verdict::Undecided {
        return Ok(Verdict::Undecided);
    }
    let prec = c.precision_bits;
    let log_n = RealEnclosure::ln_rational(&nr, prec)?;
    let bound = log_n.mul_int(&BigInt::from(c.product.total_degree()));
    let tol = rational::parse_rational(&c.tol)?;
    let mut max_hi: Option<Rational> = None;
    let mut above = false;
    for e in &c.evidence {
        let lo = rational::parse_rational(&e.point[0])?;
        let hi = rational::parse_rational(&e.point[1])?;
        let x = (&lo + &hi) / int(2);
        let claimed = RealEnclosure::from_bounds(
            &rational::parse_rational(&e.logsum[0])?,
            &rational::parse_rational(&e.logsum[1])?,
            prec,
        );
        if let Some(v) = c.product.log_eval(&x, prec) {
            if claimed.cmp_definite(&v).is_some() {
                return Err(Error::Parse(format!("evidence at {x} does not contain the recomputed value")));
            }
        }
        if claimed.lo_rational() > bound.hi_rational() + &tol {
            above = true;
        }
        let h = claimed.hi_rational();
        max_hi = Some(match max_hi {
            Some(m) if m >= h => m,
            _ => h,
        });
    }
    // The maximum is at least the exact value at 1/n.
    if above {
        return Ok(Verdict::Refuted);
    }
    match max_hi {
        Some(h) if h <= bound.lo_rational() + tol => Ok(Verdict::Certified),
        Some(_) => Ok(Verdict::Undecided),
        None => Err(Error::Parse("no evidence".into())),
    }
}

/// One row of the built-in table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableEntry {
    pub n: u32,
    pub b: Rational,
    pub product: WeightedProduct,
}

fn entry(n: u32, b: Rational, factors: &[(&[i64], u64)]) -> TableEntry {
    let product = WeightedProduct::new(factors.iter().map(|(c, e)| (IntPolynomial::from_i64s(c), *e)).collect())
        .expect("valid table entry");
    TableEntry { n, b, product }
}

/// Attaining products for `n = 3..8` with the matching right endpoints.
pub fn builtin_table() -> Vec<TableEntry> {
    vec![
        entry(
            3,
            rat(93, 200),
            &[
                (&[0, 1], 45944640),
                (
                    &[
                        1, -52, 1211, -16766, 154318, -999261, 4692047, -16202606, 41208853, -76341256, 100247244,
                        -88456310, 47054086, -11406261, 1,
                    ],
                    2450525,
                ),
                (&[-7, 153, -1405, 7041, -20832, 36442, -34944, 14184, 1], 877415),
                (&[-1, 26, -278, 1594, -5317, 10355, -10935, 4842, 1], 2571030),
                (&[-2, 50, -516, 2864, -9271, 17561, -18072, 7812, 1], 595980),
                (&[-1, 21, -179, 791, -1913, 2406, -1233, 1], 1210840),
                (&[-1, 6, -11, 7, -3, 1], 1052898),
            ],
        ),
        entry(
            4,
            rat(303, 1000),
            &[
                (&[0, 1], 640),
                (&[2, -31, 179, -456, 432, 1], 47),
                (&[2, -50, 514, -2784, 8488, -13342, 8760, 1], 35),
            ],
        ),
        entry(
            5,
            rat(23, 100),
            &[
                (&[0, 1], 1050990),
                (&[-1, 52, -1192, 15818, -133974, 751349, -2790988, 6623719, -9115714, 5544095, 1], 78796),
                (&[-1, 28, -310, 1698, -4605, 4950, 1], 21825),
            ],
        ),
        entry(
            6,
            rat(23, 125),
            &[
                (&[0, 1], 5232473),
                (&[1, -24, 215, -852, 1260, 1], 118824),
                (&[-2, 78, -1261, 10819, -51966, 132517, -140190, 1], 200917),
            ],
        ),
        entry(7, rat(37, 250), &[(&[0, 1], 44), (&[1, -31, 358, -1826, 3472, 1], 1)]),
        entry(
            8,
            rat(13, 100),
            &[(&[0, 1], 12288), (&[1, -8, 1], 246), (&[1, -25, 208, -576, 1], 741)],
        ),
    ]
}

/// Certificate for a table entry, plus the largest grid point
/// `b' = b + k * resolution < 1/(n-1)` at which the product still certifies.
#[derive(Clone, Debug, Serialize)]
pub struct BmaxCertificate {
    pub n: u32,
    #[serde(with = "rational::as_string")]
    pub b: Rational,
    /// `None` unless the printed `b` certified.
    #[serde(serialize_with = "ser_opt_rat")]
    pub extended_b: Option<Rational>,
    pub certificate: Certificate,
}

fn ser_opt_rat<S: serde::Serializer>(v: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    v.as_ref().map(|x| x.to_string()).serialize(s)
}

pub fn certify_bmax_lower(n: u32, tol: &Rational) -> Result<BmaxCertificate> {
    certify_bmax_lower_with(n, tol, &default_resolution(), crate::enclosure::DEFAULT_PRECISION, crate::enclosure::MAX_PRECISION)
}

pub fn certify_bmax_lower_with(n: u32, tol: &Rational, resolution: &Rational, prec: u32, max_prec: u32) -> Result<BmaxCertificate> {
    if !(3..=8).contains(&n) {
        return Err(Error::InvalidArgument(format!("no table entry for n = {n}")));
    }
    if !resolution.is_positive() {
        return Err(Error::InvalidArgument("resolution must be positive".into()));
    }
    let e = builtin_table().into_iter().find(|e| e.n == n).expect("table covers 3..8");
    let iv = |b: &Rational| RatInterval::new(int(0), b.clone());
    let cert = verify_attaining_with(&e.product, &iv(&e.b)?, n, tol, prec, max_prec)?;
    if cert.verdict != Verdict::Certified {
        return Ok(BmaxCertificate { n, b: e.b, extended_b: None, certificate: cert });
    }
    // Largest k with b + k r < 1/(n-1) and certification at b + k r.
    let cap = rat(1, n as i64 - 1);
    let steps = ((&cap - &e.b) / resolution).ceil().to_integer() - BigInt::one();
    let (mut lo, mut hi) = (BigInt::zero(), steps + BigInt::one());
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi) / 2;
        let b = &e.b + resolution * Rational::from_integer(mid.clone());
        let ok = verify_attaining_with(&e.product, &iv(&b)?, n, tol, prec, max_prec)?.verdict == Verdict::Certified;
        debug!("n = {n}: b = {b} {}", if ok { "certifies" } else { "fails" });
        if ok {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let extended = &e.b + resolution * Rational::from_integer(lo);
    info!("n = {n}: certified at {} and up to {extended}", e.b);
    Ok(BmaxCertificate { n, b: e.b, extended_b: Some(extended), certificate: cert })
}

/// Table entries certified in parallel, ordered by `n`.
pub fn certify_all(tol: &Rational, resolution: &Rational, prec: u32, max_prec: u32) -> Result<Vec<BmaxCertificate>> {
    (3..=8u32).into_par_iter().map(|n| certify_bmax_lower_with(n, tol, resolution, prec, max_prec)).collect()
}

/// Plateaus `t_M([0, b]) = 1/n` backed by certified entries.
pub fn certified_plateaus(certs: &[BmaxCertificate]) -> Vec<crate::bounds::Plateau> {
    let mut out: Vec<_> = certs
        .iter()
        .filter(|c| c.certificate.verdict == Verdict::Certified)
        .map(|c| crate::bounds::Plateau { n: c.n, b: c.extended_b.clone().unwrap_or_else(|| c.b.clone()) })
        .collect();
    out.sort_by_key(|p| p.n);
    out
}

/// Orders two verdicts by severity for batch exit codes.
pub fn worst(a: Verdict, b: Verdict) -> Verdict {
    let rank = |v: Verdict| match v {
        Verdict::Certified => 0,
        Verdict::Refuted => 1,
        Verdict::Undecided => 2,
    };
    match rank(a).cmp(&rank(b)) {
        Ordering::Less => b,
        _ => a,
    }
}
