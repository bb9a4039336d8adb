//! Exponent optimization: the linear program for the weights of a product
//! of known factors, the exchange loop that grows its sample set, and
//! rationalization of the resulting exponents.

use std::collections::BTreeSet;

use log::{debug, warn};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::enclosure::RealEnclosure;
use crate::error::{Error, Result};
use crate::poly::{resultant, IntPolynomial};
use crate::rational::{self, int, rat, Rational};
use crate::realanalysis::{isolate_roots, sturm_count, IsolatingInterval, LogSum, RatInterval, WeightedProduct};
use crate::simplex::{solve_verified, Lp};

/// Bits kept in the rounded LP coefficients.
const DATA_BITS: i64 = 64;

/// Shape of the slack function `g`: zero within `radius` of a root of `q`,
/// `epsilon` elsewhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GParams {
    pub epsilon: Rational,
    pub radius: Rational,
}

impl Default for GParams {
    fn default() -> Self {
        GParams { epsilon: rat(1, 1_000_000), radius: rat(1, 1_000_000_000) }
    }
}

/// `0` if `x` lies within `radius` of a root of `q`, otherwise `epsilon`.
pub fn g_function(q: &IntPolynomial, x: &Rational, epsilon: &Rational, radius: &Rational) -> Result<Rational> {
    if !epsilon.is_positive() || radius.is_negative() {
        return Err(Error::InvalidArgument("g needs epsilon > 0 and radius >= 0".into()));
    }
    if q.sign_at(x).is_eq() {
        return Ok(Rational::zero());
    }
    if radius.is_positive() {
        let near = RatInterval::new(x - radius, x + radius)?;
        if sturm_count(q, &near)? > 0 {
            return Ok(Rational::zero());
        }
    }
    Ok(epsilon.clone())
}

fn round_bits(x: &Rational, bits: i64) -> Rational {
    let scale = rational::pow2(bits);
    (x * &scale).round() / scale
}

/// The real roots of `q`, each exact or refined to width `2^-prec`.
fn q_roots(q: &IntPolynomial, prec: u32) -> Result<Vec<IsolatingInterval>> {
    crate::realanalysis::real_roots(q, &rational::pow2(-(prec as i64)))
}

/// Decomposition of the normalized logs `(1/deg f_i) log|f_i(beta_s)|` over
/// `b_1 = -(1/d) log a_d` and further generators.
#[derive(Clone, Debug, Serialize)]
pub struct LogLatticeDecomposition {
    /// `b_1, ..., b_l`.
    pub basis: Vec<RealEnclosure>,
    /// `coords[s][j][i]`: coefficient of `b_j` in the value of factor `i` at
    /// root `s`.
    #[serde(serialize_with = "ser_coords")]
    pub coords: Vec<Vec<Vec<Rational>>>,
    /// `fhat[s][i]`.
    pub fhat: Vec<Vec<RealEnclosure>>,
}

fn ser_coords<S: serde::Serializer>(c: &[Vec<Vec<Rational>>], s: S) -> std::result::Result<S::Ok, S::Error> {
    let strs: Vec<Vec<Vec<String>>> =
        c.iter().map(|a| a.iter().map(|b| b.iter().map(|x| x.to_string()).collect()).collect()).collect();
    strs.serialize(s)
}

impl LogLatticeDecomposition {
    /// Enclosure of `sum_j coords[s][j][i] b_j`.
    pub fn recombine(&self, s: usize, i: usize) -> RealEnclosure {
        let prec = self.basis[0].precision();
        self.basis.iter().enumerate().fold(RealEnclosure::from_int(0, prec), |acc, (j, b)| {
            acc.add(&b.mul_rational(&self.coords[s][j][i]))
        })
    }
}

/// `t` with `a^t = r`, if any.
fn exact_log(r: &BigInt, a: &BigInt) -> Option<u32> {
    let mut t = 0;
    let mut x = r.clone();
    while x > BigInt::one() {
        let (q, rem) = x.div_rem(a);
        if !rem.is_zero() {
            return None;
        }
        x = q;
        t += 1;
    }
    (x.is_one()).then_some(t)
}

/// Expresses each `(1/deg f_i) log|f_i(beta_s)|` over `b_1 = -(1/d) log a_d`.
///
/// For linear `q` the coordinate is read off `|Res(f_i, q)| = a_d^t` exactly.
/// Otherwise a small-denominator multiple of `b_1` is accepted only if it
/// matches to within `2^(16 - prec)`. Values that fit neither way become new
/// generators.
pub fn log_lattice_decompose(factors: &[IntPolynomial], q: &IntPolynomial, prec: u32) -> Result<LogLatticeDecomposition> {
    let d = q.degree().ok_or(Error::ZeroPolynomial)?;
    let a_d = q.leading().unwrap().abs();
    if d == 0 || a_d <= BigInt::one() {
        return Err(Error::NotObstruction(format!("{q}")));
    }
    let roots = q_roots(q, prec)?;
    if roots.len() != d {
        return Err(Error::InvalidArgument(format!("{q} does not have {d} distinct real roots")));
    }
    let b1 = RealEnclosure::ln_rational(&Rational::from_integer(a_d.clone()), prec)?
        .mul_rational(&rat(-1, d as i64));
    let mut basis = vec![b1.clone()];
    let n = factors.len();
    let mut fhat = Vec::with_capacity(d);
    let mut raw: Vec<Vec<Option<Rational>>> = Vec::with_capacity(d);
    for root in &roots {
        let mut row_f = Vec::with_capacity(n);
        let mut row_c = Vec::with_capacity(n);
        for f in factors {
            let deg = f.degree().filter(|&k| k > 0).ok_or_else(|| Error::InvalidArgument(format!("constant factor {f}")))?;
            let value = abs_value_at_root(f, root, prec)?;
            let fh = value.ln()?.mul_rational(&rat(1, deg as i64));
            let c = if d == 1 {
                let r = resultant(f, q)?.abs();
                if r.is_zero() {
                    return Err(Error::Degenerate(format!("{f} vanishes at a root of {q}")));
                }
                exact_log(&r, &a_d).map(|t| rat(deg as i64 - t as i64, deg as i64))
            } else {
                match_multiple(&fh, &b1, (deg * d * 4) as i64, prec)
            };
            row_f.push(fh);
            row_c.push(c);
        }
        fhat.push(row_f);
        raw.push(row_c);
    }
    let fresh: Vec<(usize, usize)> = (0..d)
        .flat_map(|s| (0..n).map(move |i| (s, i)))
        .filter(|&(s, i)| raw[s][i].is_none())
        .collect();
    for &(s, i) in &fresh {
        debug!("factor {} at root {s} gets its own generator", factors[i]);
        basis.push(fhat[s][i].clone());
    }
    let l = basis.len();
    let mut coords = vec![vec![vec![Rational::zero(); n]; l]; d];
    for s in 0..d {
        for i in 0..n {
            if let Some(c) = &raw[s][i] {
                coords[s][0][i] = c.clone();
            }
        }
    }
    for (k, &(s, i)) in fresh.iter().enumerate() {
        coords[s][k + 1][i] = Rational::one();
    }
    Ok(LogLatticeDecomposition { basis, coords, fhat })
}

fn abs_value_at_root(f: &IntPolynomial, root: &IsolatingInterval, prec: u32) -> Result<RealEnclosure> {
    if root.is_exact() {
        let v = f.eval_rational(&root.lo).abs();
        if v.is_zero() {
            return Err(Error::Degenerate(format!("{f} vanishes at a root")));
        }
        return Ok(RealEnclosure::from_rational(&v, prec));
    }
    let m = root.mid();
    let half = root.width() / int(2);
    let radius = root.lo.abs().max(root.hi.abs());
    let err = f.derivative().abs_bound(&radius) * &half;
    let v = RealEnclosure::from_rational(&f.eval_rational(&m), prec).widen(&err).abs();
    if !v.lo_rational().is_positive() {
        return Err(Error::Degenerate(format!("{f} may vanish at a root")));
    }
    Ok(v)
}

fn match_multiple(x: &RealEnclosure, b: &RealEnclosure, max_den: i64, prec: u32) -> Option<Rational> {
    let ratio = x.div(b).ok()?;
    let c = rational::convergent_with_limit(&ratio.mid(), &BigInt::from(max_den));
    let diff = b.mul_rational(&c).sub(x);
    let tol = rational::pow2(16 - prec as i64);
    (diff.lo_rational().abs() <= tol && diff.hi_rational().abs() <= tol).then_some(c)
}

/// One labelled equality row `coeffs . alpha = rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EqRow {
    pub label: String,
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
}

/// The exponent LP: minimize `m` subject to
/// `sum_i w_i(x) alpha_i <= m - g(x)` for `x` in the sample set,
/// the equality rows, and `alpha >= 0`, with `w_i(x) = log|f_i(x)| / deg f_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpProblem {
    pub points: Vec<Rational>,
    /// `ineq[k][i] = w_i(points[k])`, rounded to 64 fractional bits.
    pub ineq: Vec<Vec<Rational>>,
    pub slack: Vec<Rational>,
    pub eq: Vec<EqRow>,
    pub n_factors: usize,
    /// Points dropped because some factor vanishes there.
    pub dropped: Vec<Rational>,
}

impl LpProblem {
    /// Standard form over `(alpha, m+, m-)`: maximize `-m`.
    pub fn to_lp(&self) -> Lp<Rational> {
        let n = self.n_factors;
        let mut a = Vec::new();
        let mut b = Vec::new();
        for (row, g) in self.ineq.iter().zip(&self.slack) {
            let mut r = row.clone();
            r.push(int(-1));
            r.push(int(1));
            a.push(r);
            b.push(-g.clone());
        }
        for e in &self.eq {
            let mut r = e.coeffs.clone();
            r.push(int(0));
            r.push(int(0));
            a.push(r.clone());
            b.push(e.rhs.clone());
            a.push(r.into_iter().map(|x| -x).collect());
            b.push(-e.rhs.clone());
        }
        let mut c = vec![int(0); n];
        c.push(int(-1));
        c.push(int(1));
        Lp { a, b, c }
    }
}

/// A kept sample point, its row and its slack.
type SampleRow = (Rational, Vec<Rational>, Rational);

/// Builds the LP rows: the sampled norm rows, `sum alpha = 1`, the
/// stationarity rows `sum (alpha_i / deg f_i) f_i'/f_i (beta) = 0` at roots
/// of `q` interior to the interval, and the lattice rows
/// `sum_i c_{j,i} alpha_i = [j = 1]` per root.
pub fn assemble_lp(
    factors: &[IntPolynomial],
    points: &[Rational],
    iv: &RatInterval,
    q: &IntPolynomial,
    g: &GParams,
    prec: u32,
) -> Result<LpProblem> {
    if factors.is_empty() {
        return Err(Error::InvalidArgument("no factors".into()));
    }
    if points.is_empty() {
        return Err(Error::InvalidArgument("empty sample set".into()));
    }
    let n = factors.len();
    let degs: Vec<i64> = factors
        .iter()
        .map(|f| f.degree().filter(|&d| d > 0).map(|d| d as i64).ok_or_else(|| Error::InvalidArgument(format!("constant factor {f}"))))
        .collect::<Result<_>>()?;
    let rows: Vec<Result<Option<SampleRow>>> = points
        .par_iter()
        .map(|x| {
            let mut row = Vec::with_capacity(n);
            for (f, &d) in factors.iter().zip(&degs) {
                let v = f.eval_rational(x).abs();
                if v.is_zero() {
                    return Ok(None);
                }
                let l = RealEnclosure::ln_rational(&v, prec)?;
                row.push(round_bits(&(l.mid() / int(d)), DATA_BITS));
            }
            Ok(Some((x.clone(), row, g_function(q, x, &g.epsilon, &g.radius)?)))
        })
        .collect();
    let mut kept = Vec::new();
    let mut ineq = Vec::new();
    let mut slack = Vec::new();
    let mut dropped = Vec::new();
    for (x, r) in points.iter().zip(rows) {
        match r? {
            Some((x, row, gx)) => {
                kept.push(x);
                ineq.push(row);
                slack.push(gx);
            }
            None => {
                debug!("dropping sample point {x}: a factor vanishes there");
                dropped.push(x.clone());
            }
        }
    }
    if kept.is_empty() {
        return Err(Error::Degenerate("every sample point is a factor root".into()));
    }

    let mut eq = vec![EqRow { label: "sum".into(), coeffs: vec![int(1); n], rhs: int(1) }];
    let roots = q_roots(q, prec)?;
    for (s, root) in roots.iter().enumerate() {
        let beta = root.mid();
        let interior = iv.a() < &root.lo && &root.hi < iv.b();
        if !interior {
            continue;
        }
        let mut coeffs = Vec::with_capacity(n);
        for (f, &d) in factors.iter().zip(&degs) {
            let fv = f.eval_rational(&beta);
            if fv.is_zero() {
                return Err(Error::Degenerate(format!("{f} vanishes at a root of {q}")));
            }
            let ratio = f.derivative().eval_rational(&beta) / fv / int(d);
            coeffs.push(if root.is_exact() { ratio } else { round_bits(&ratio, DATA_BITS) });
        }
        eq.push(EqRow { label: format!("stationary@{s}"), coeffs, rhs: int(0) });
    }
    let dec = log_lattice_decompose(factors, q, prec)?;
    for s in 0..dec.coords.len() {
        for (j, c) in dec.coords[s].iter().enumerate() {
            let rhs = if j == 0 { int(1) } else { int(0) };
            eq.push(EqRow { label: format!("lattice@{s},{j}"), coeffs: c.clone(), rhs });
        }
    }
    Ok(LpProblem { points: kept, ineq, slack, eq, n_factors: n, dropped })
}

/// Optimal weights of one LP solve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpOutcome {
    pub alpha: Vec<Rational>,
    /// Optimal `m` for the rounded data.
    pub m: Rational,
    /// Whether the floating-point vertex verified exactly (otherwise the
    /// exact simplex produced the answer).
    pub float_vertex_verified: bool,
}

pub fn solve_lp(lp: &LpProblem) -> Result<LpOutcome> {
    if lp.points.is_empty() {
        return Err(Error::InvalidArgument("empty sample set".into()));
    }
    let (sol, verified) = solve_verified(&lp.to_lp())?;
    let n = lp.n_factors;
    let alpha = sol.y[..n].to_vec();
    let m = &sol.y[n] - &sol.y[n + 1];
    Ok(LpOutcome { alpha, m, float_vertex_verified: verified })
}

/// One exchange round.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RoundRecord {
    pub round: usize,
    #[serde(with = "rational::as_string")]
    pub m: Rational,
    pub m_decimal: String,
    pub points: usize,
}

/// Weights from the exchange loop.
#[derive(Clone, Debug, Serialize)]
pub struct ExponentSolution {
    #[serde(serialize_with = "ser_rats")]
    pub alpha: Vec<Rational>,
    /// `m` of the final round, widened by the coefficient rounding error.
    pub m: RealEnclosure,
    pub history: Vec<RoundRecord>,
    pub converged: bool,
    #[serde(serialize_with = "ser_rats")]
    pub points: Vec<Rational>,
}

fn ser_rats<S: serde::Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().serialize(s)
}

impl ExponentSolution {
    pub fn m_f64(&self) -> f64 {
        self.m.mid_f64()
    }
}

fn chebyshev_points(iv: &RatInterval, count: usize) -> Vec<Rational> {
    let (a, b) = (rational::to_f64(iv.a()), rational::to_f64(iv.b()));
    (0..count)
        .map(|k| {
            let t = ((2 * k + 1) as f64 * std::f64::consts::PI / (2 * count) as f64).cos();
            let x = rational::from_f64((a + b) / 2.0 + (b - a) / 2.0 * t);
            x.max(iv.a().clone()).min(iv.b().clone())
        })
        .collect()
}

/// 64 Chebyshev points, both endpoints and the roots of `q` in the interval.
pub fn default_x_init(iv: &RatInterval, q: &IntPolynomial) -> Result<Vec<Rational>> {
    let mut pts = chebyshev_points(iv, 64);
    pts.push(iv.a().clone());
    pts.push(iv.b().clone());
    for r in isolate_roots(q, iv, &rational::pow2(-80))? {
        pts.push(if r.is_exact() { r.lo } else { rational::simplest_in(&r.lo, &r.hi) });
    }
    Ok(dedup_sorted(pts))
}

fn dedup_sorted(pts: Vec<Rational>) -> Vec<Rational> {
    pts.into_iter().collect::<BTreeSet<_>>().into_iter().collect()
}

/// Interior stationary points of `sum (alpha_i / deg f_i) log|f_i|` on the
/// interval, as simple rationals within `2^-48` of each point.
fn extrema(factors: &[IntPolynomial], alpha: &[Rational], iv: &RatInterval) -> Result<Vec<Rational>> {
    let limit = BigInt::from(1u64 << 32);
    let weights: Vec<Rational> = factors
        .iter()
        .zip(alpha)
        .map(|(f, a)| rational::convergent_with_limit(&(a / int(f.deg0() as i64)), &limit))
        .collect();
    let sum = LogSum::new(factors.to_vec(), weights);
    if sum.is_empty() {
        return Ok(Vec::new());
    }
    match sum.critical_points(iv, &rational::pow2(-48)) {
        Ok(c) => Ok(c
            .interior
            .into_iter()
            .map(|r| if r.is_exact() { r.lo } else { rational::simplest_in(&r.lo, &r.hi) })
            .collect()),
        Err(Error::Degenerate(_)) => Ok(Vec::new()),
        Err(e) => Err(e),
    }
}

/// Exchange loop: solve the LP on the sample set, add the extrema of the
/// resulting normalized product, and repeat until `|m_k - m_{k-1}| < eps` or
/// `rounds_max` rounds.
#[allow(clippy::too_many_arguments)]
pub fn remez_iterate(
    iv: &RatInterval,
    factors: &[IntPolynomial],
    q: &IntPolynomial,
    eps: &Rational,
    x_init: Option<Vec<Rational>>,
    rounds_max: usize,
    g: &GParams,
    prec: u32,
) -> Result<ExponentSolution> {
    if eps.is_negative() {
        return Err(Error::InvalidArgument("eps must be >= 0".into()));
    }
    if rounds_max == 0 {
        return Err(Error::InvalidArgument("rounds_max must be >= 1".into()));
    }
    let mut points = match x_init {
        Some(p) => dedup_sorted(p),
        None => default_x_init(iv, q)?,
    };
    let mut history: Vec<RoundRecord> = Vec::new();
    let mut last: Option<LpOutcome> = None;
    let mut converged = false;
    for round in 1..=rounds_max {
        let at = |e: Error| Error::AtRound { round, source: Box::new(e) };
        let lp = assemble_lp(factors, &points, iv, q, g, prec).map_err(at)?;
        let sol = solve_lp(&lp).map_err(at)?;
        history.push(RoundRecord {
            round,
            m: sol.m.clone(),
            m_decimal: format!("{:.15}", rational::to_f64(&sol.m)),
            points: lp.points.len(),
        });
        debug!("round {round}: m = {}", rational::to_f64(&sol.m));
        if let Some(prev) = &last {
            if (&sol.m - &prev.m).abs() < *eps {
                last = Some(sol);
                converged = true;
                break;
            }
        }
        for x in extrema(factors, &sol.alpha, iv).map_err(at)? {
            if iv.contains(&x) {
                points.push(x);
            }
        }
        points = dedup_sorted(points);
        last = Some(sol);
    }
    let sol = last.expect("at least one round");
    let err = rational::pow2(-DATA_BITS) * int(factors.len() as i64);
    let m = RealEnclosure::from_rational(&sol.m, prec).widen(&err);
    Ok(ExponentSolution { alpha: sol.alpha, m, history, converged, points })
}

/// Integer exponents from weights: each `alpha_i` is replaced by its best
/// continued-fraction convergent with denominator at most `denom_limit`, the
/// result is renormalized to sum one, and the denominators of
/// `alpha_i / deg f_i` are cleared. Zero entries mark dropped factors.
pub fn rationalize_exponents(alpha: &[Rational], degrees: &[usize], denom_limit: &BigInt) -> Result<Vec<u64>> {
    if alpha.len() != degrees.len() || alpha.is_empty() {
        return Err(Error::InvalidArgument("alpha and degrees must be nonempty and the same length".into()));
    }
    if denom_limit < &BigInt::one() {
        return Err(Error::InvalidArgument("denom_limit must be >= 1".into()));
    }
    if degrees.contains(&0) {
        return Err(Error::InvalidArgument("factor of degree 0".into()));
    }
    let snapped: Vec<Rational> = alpha
        .iter()
        .map(|a| rational::convergent_with_limit(a, denom_limit).max(Rational::zero()))
        .collect();
    for (a, s) in alpha.iter().zip(&snapped) {
        if s.is_zero() && a > &rat(1, 1000) {
            warn!("weight {a} snapped to zero");
        }
    }
    let total: Rational = snapped.iter().sum();
    if total.is_zero() {
        return Err(Error::InvalidArgument("every weight rounds to zero".into()));
    }
    let w: Vec<Rational> = snapped.iter().zip(degrees).map(|(s, &d)| s / &total / int(d as i64)).collect();
    let l = rational::lcm_all(w.iter().map(|x| x.denom()));
    let ints: Vec<BigInt> = w.iter().map(|x| (x * Rational::from_integer(l.clone())).to_integer()).collect();
    let g = rational::gcd_all(ints.iter());
    ints.iter()
        .map(|e| (e / &g).to_u64().ok_or_else(|| Error::InvalidArgument("exponent exceeds 64 bits".into())))
        .collect()
}

/// The product `prod f_i^{e_i}` over nonzero exponents.
pub fn product_from_exponents(factors: &[IntPolynomial], exps: &[u64]) -> Result<WeightedProduct> {
    WeightedProduct::new(factors.iter().cloned().zip(exps.iter().copied()).filter(|(_, e)| *e > 0).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realanalysis::log_supnorm_weighted;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    fn iv(a: Rational, b: Rational) -> RatInterval {
        RatInterval::new(a, b).unwrap()
    }

    fn toy() -> (RatInterval, Vec<IntPolynomial>, IntPolynomial) {
        (iv(int(0), int(1)), vec![p(&[0, 1]), p(&[-1, 1])], p(&[-1, 2]))
    }

    #[test]
    fn g_examples() {
        let q = p(&[-1, 2]);
        let e = rat(1, 1_000_000);
        assert_eq!(g_function(&q, &rat(1, 2), &e, &rat(1, 1_000_000_000)).unwrap(), int(0));
        assert_eq!(g_function(&q, &int(0), &e, &rat(1, 1_000_000_000)).unwrap(), e);
        assert_eq!(g_function(&q, &rat(1, 2), &e, &int(0)).unwrap(), int(0));
        assert_eq!(g_function(&q, &(rat(1, 2) + rat(1, 2_000_000_000)), &e, &rat(1, 1_000_000_000)).unwrap(), int(0));
        assert!(g_function(&q, &int(0), &int(0), &int(0)).is_err());
    }

    #[test]
    fn decomposition_examples() {
        let d = log_lattice_decompose(&[p(&[0, 1])], &p(&[-1, 4]), 256).unwrap();
        assert_eq!(d.coords[0][0][0], int(1));
        assert_eq!(d.basis.len(), 1);
        let f5 = p(&[2, -31, 179, -456, 432, 1]);
        assert_eq!(f5.eval_rational(&rat(1, 4)), rat(1, 1024));
        let d = log_lattice_decompose(&[f5], &p(&[-1, 4]), 256).unwrap();
        assert_eq!(d.coords[0][0][0], int(1));
        assert!(d.recombine(0, 0).cmp_definite(&d.fhat[0][0]).is_none());
        // |x + 1| = 3/2 at 1/2 is not a power of 2.
        let d = log_lattice_decompose(&[p(&[1, 1])], &p(&[-1, 2]), 256).unwrap();
        assert_eq!(d.basis.len(), 2);
        assert_eq!((d.coords[0][0][0].clone(), d.coords[0][1][0].clone()), (int(0), int(1)));
        assert!(log_lattice_decompose(&[p(&[-1, 2])], &p(&[-1, 2]), 256).is_err());
    }

    #[test]
    fn resultant_route_coordinates() {
        // x^2 - 3x + 1 at 1/3 is 1/9.
        let d = log_lattice_decompose(&[p(&[1, -3, 1])], &p(&[-1, 3]), 256).unwrap();
        assert_eq!(d.coords[0][0][0], int(1));
        // x^3 - x at 1/2 is -3/8.
        let d = log_lattice_decompose(&[p(&[0, -1, 0, 1])], &p(&[-1, 2]), 256).unwrap();
        assert_eq!(d.basis.len(), 2);
    }

    #[test]
    fn quadratic_obstruction_decomposition() {
        // q = 5x^2 - 5x + 1, roots (5 +- sqrt 5)/10; x(x - 1) = -1/5 at both.
        let q = p(&[1, -5, 5]);
        let d = log_lattice_decompose(&[p(&[0, -1, 1])], &q, 256).unwrap();
        assert_eq!(d.coords.len(), 2);
        for s in 0..2 {
            assert_eq!(d.coords[s][0][0], int(1));
            assert!(d.recombine(s, 0).cmp_definite(&d.fhat[s][0]).is_none());
        }
    }

    #[test]
    fn assemble_examples() {
        let (i, f, q) = toy();
        let pts: Vec<Rational> = chebyshev_points(&i, 65);
        let lp = assemble_lp(&f, &pts, &i, &q, &GParams::default(), 256).unwrap();
        let stat = lp.eq.iter().find(|r| r.label.starts_with("stationary")).unwrap();
        assert_eq!(stat.coeffs, vec![int(2), int(-2)]);
        assert_eq!(lp.eq[0].coeffs, vec![int(1), int(1)]);
        assert_eq!(lp.eq[0].rhs, int(1));
        let lattice = lp.eq.iter().find(|r| r.label.starts_with("lattice")).unwrap();
        assert_eq!((lattice.coeffs.clone(), lattice.rhs.clone()), (vec![int(1), int(1)], int(1)));

        let lp = assemble_lp(&[p(&[0, 1])], &[rat(1, 6), rat(1, 3)], &iv(int(0), rat(1, 3)), &p(&[-1, 3]), &GParams::default(), 256).unwrap();
        assert!(!lp.eq.iter().any(|r| r.label.starts_with("stationary")));
        let lattice = lp.eq.iter().find(|r| r.label.starts_with("lattice")).unwrap();
        assert_eq!((lattice.coeffs.clone(), lattice.rhs.clone()), (vec![int(1)], int(1)));

        let lp = assemble_lp(&f, &[int(0), rat(1, 4)], &i, &q, &GParams::default(), 256).unwrap();
        assert_eq!(lp.dropped, vec![int(0)]);
        assert!(assemble_lp(&f, &[], &i, &q, &GParams::default(), 256).is_err());
    }

    #[test]
    fn solve_examples() {
        let (i, f, q) = toy();
        let lp = assemble_lp(&f, &default_x_init(&i, &q).unwrap(), &i, &q, &GParams::default(), 256).unwrap();
        let s = solve_lp(&lp).unwrap();
        assert_eq!(s.alpha, vec![rat(1, 2), rat(1, 2)]);
        assert!((rational::to_f64(&s.m) - 0.5f64.ln()).abs() < 1e-12);

        let third = iv(int(0), rat(1, 3));
        let q3 = p(&[-1, 3]);
        let lp = assemble_lp(&[p(&[0, 1])], &default_x_init(&third, &q3).unwrap(), &third, &q3, &GParams::default(), 256).unwrap();
        let s = solve_lp(&lp).unwrap();
        assert_eq!(s.alpha, vec![int(1)]);
        assert!((rational::to_f64(&s.m) - (1.0f64 / 3.0).ln()).abs() < 1e-12);
    }

    #[test]
    fn toy_optimality_on_grid() {
        let (i, f, q) = toy();
        let pts = default_x_init(&i, &q).unwrap();
        let mut lp = assemble_lp(&f, &pts, &i, &q, &GParams::default(), 256).unwrap();
        lp.eq.truncate(1);
        let s = solve_lp(&lp).unwrap();
        let m_lp = rational::to_f64(&s.m);
        let rows: Vec<(Vec<f64>, f64)> = lp
            .ineq
            .iter()
            .zip(&lp.slack)
            .map(|(r, g)| (r.iter().map(rational::to_f64).collect(), rational::to_f64(g)))
            .collect();
        for k in 0..=10_000 {
            let a1 = k as f64 / 10_000.0;
            let m = rows.iter().map(|(r, g)| a1 * r[0] + (1.0 - a1) * r[1] + g).fold(f64::NEG_INFINITY, f64::max);
            assert!(m >= m_lp - 1e-12, "alpha_1 = {a1}");
        }
    }

    #[test]
    fn permutation_invariance() {
        let i = iv(int(0), rat(7, 18));
        let q = p(&[-1, 3]);
        let f = vec![p(&[0, 1]), p(&[1, -3, 1])];
        let pts = default_x_init(&i, &q).unwrap();
        let a = solve_lp(&assemble_lp(&f, &pts, &i, &q, &GParams::default(), 256).unwrap()).unwrap();
        let rev: Vec<_> = f.iter().rev().cloned().collect();
        let b = solve_lp(&assemble_lp(&rev, &pts, &i, &q, &GParams::default(), 256).unwrap()).unwrap();
        assert!((rational::to_f64(&a.m) - rational::to_f64(&b.m)).abs() < 1e-9);
        assert_eq!(a.alpha[0], b.alpha[1]);
    }

    #[test]
    fn remez_examples() {
        let (i, f, q) = toy();
        let eps = rat(1, 1_000_000_000);
        let s = remez_iterate(&i, &f, &q, &eps, Some(vec![rat(1, 4), rat(3, 4)]), 10, &GParams::default(), 256).unwrap();
        assert!(s.converged && s.history.len() <= 5);
        assert!((s.m_f64() - 0.5f64.ln()).abs() < 1e-9);
        assert_eq!(s.alpha, vec![rat(1, 2), rat(1, 2)]);

        let fifth = iv(int(0), rat(1, 5));
        let s = remez_iterate(&fifth, &[p(&[0, 1])], &p(&[-1, 5]), &eps, None, 10, &GParams::default(), 256).unwrap();
        assert!(s.converged && s.history.len() == 2);
        assert!((s.m_f64() - 0.2f64.ln()).abs() < 1e-12);

        let s = remez_iterate(&i, &f, &q, &int(0), None, 3, &GParams::default(), 256).unwrap();
        assert!(!s.converged && s.history.len() == 3);
    }

    #[test]
    fn remez_matches_log_supnorm() {
        let i = iv(int(0), rat(7, 18));
        let q = p(&[-1, 3]);
        let f = vec![p(&[0, 1]), p(&[1, -3, 1])];
        let eps = rat(1, 1_000_000_000);
        let s = remez_iterate(&i, &f, &q, &eps, None, 20, &GParams::default(), 256).unwrap();
        assert!(s.converged);
        let exps = rationalize_exponents(&s.alpha, &[1, 2], &BigInt::from(1000)).unwrap();
        assert_eq!(exps, vec![7, 1]);
        let prod = product_from_exponents(&f, &exps).unwrap();
        let l = log_supnorm_weighted(&prod, &i).unwrap().mid_f64() / prod.total_degree() as f64;
        assert!((l - s.m_f64()).abs() < 1e-8);
    }

    #[test]
    fn remez_reports_round_of_failure() {
        // x vanishes at the root of 3x.
        let i = iv(int(0), rat(1, 3));
        let r = remez_iterate(&i, &[p(&[0, 1])], &p(&[0, 3]), &rat(1, 10), Some(vec![rat(1, 6)]), 3, &GParams::default(), 256);
        assert!(matches!(r, Err(Error::AtRound { round: 1, .. })));
    }

    #[test]
    fn rationalize_examples() {
        let lim = BigInt::from(1000);
        assert_eq!(rationalize_exponents(&[rat(1, 2), rat(1, 2)], &[1, 1], &lim).unwrap(), vec![1, 1]);
        assert_eq!(
            rationalize_exponents(&[rat(4, 7), rat(47, 224), rat(7, 32)], &[1, 5, 7], &lim).unwrap(),
            vec![640, 47, 35]
        );
        assert!(rationalize_exponents(&[rat(1, 2), rat(1, 2)], &[1, 1], &BigInt::one()).is_err());
        assert_eq!(rationalize_exponents(&[int(1)], &[3], &BigInt::one()).unwrap(), vec![1]);
        // Near-zero weights are dropped.
        assert_eq!(rationalize_exponents(&[rat(1, 100_000), rat(99_999, 100_000)], &[1, 1], &lim).unwrap(), vec![0, 1]);
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(64))]

        #[test]
        fn rationalized_weights_sum_to_one(raw in proptest::collection::vec(1u32..1000, 1..6), degs in proptest::collection::vec(1usize..8, 6)) {
            let total: u32 = raw.iter().sum();
            let alpha: Vec<Rational> = raw.iter().map(|&x| rat(x as i64, total as i64)).collect();
            let degs = &degs[..alpha.len()];
            let e = rationalize_exponents(&alpha, degs, &BigInt::from(1_000_000)).unwrap();
            // With a generous limit the exponents reproduce alpha exactly.
            let d: u64 = e.iter().zip(degs).map(|(x, &k)| x * k as u64).sum();
            for ((x, &k), a) in e.iter().zip(degs).zip(&alpha) {
                proptest::prop_assert_eq!(rat((x * k as u64) as i64, d as i64), a.clone());
            }
        }
    }
}
