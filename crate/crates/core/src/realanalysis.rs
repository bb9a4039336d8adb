//! Sturm sequences, real-root isolation and rigorous sup norms of
//! polynomials and of weighted products of polynomials on rational
//! intervals.

use std::cmp::Ordering;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::enclosure::{RealEnclosure, DEFAULT_PRECISION};
use crate::error::{Error, Result};
use crate::poly::IntPolynomial;
use crate::rational::{self, parse_rational, simplest_in, Rational};

/// Closed interval `[a, b]` with rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatInterval {
    a: Rational,
    b: Rational,
}

impl RatInterval {
    pub fn new(a: Rational, b: Rational) -> Result<Self> {
        if a > b {
            return Err(Error::InvalidInterval(format!("[{a}, {b}] has a > b")));
        }
        Ok(RatInterval { a, b })
    }

    /// An interval admissible as a transfinite-diameter domain: length < 4.
    pub fn domain(a: Rational, b: Rational) -> Result<Self> {
        let iv = Self::new(a, b)?;
        if iv.width() >= rational::int(4) {
            return Err(Error::InvalidInterval(format!("[{}, {}] has length >= 4", iv.a, iv.b)));
        }
        Ok(iv)
    }

    /// Parses `"a,b"` where each end is an integer, fraction or decimal.
    pub fn parse(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("interval {s:?} is not of the form a,b")))?;
        Self::new(parse_rational(a)?, parse_rational(b)?)
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn width(&self) -> Rational {
        &self.b - &self.a
    }

    pub fn mid(&self) -> Rational {
        (&self.a + &self.b) / rational::int(2)
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.a <= x && x <= &self.b
    }

    pub fn is_degenerate(&self) -> bool {
        self.a == self.b
    }
}

impl std::fmt::Display for RatInterval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}]", self.a, self.b)
    }
}

/// Interval containing exactly one real root. `lo == hi` marks a root known
/// exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolatingInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl IsolatingInterval {
    pub fn exact(x: Rational) -> Self {
        IsolatingInterval { lo: x.clone(), hi: x }
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Rational {
        (&self.lo + &self.hi) / rational::int(2)
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }
}

/// Sturm chain of the squarefree part of a polynomial.
#[derive(Clone, Debug)]
pub struct SturmSequence {
    chain: Vec<IntPolynomial>,
}

impl SturmSequence {
    pub fn new(p: &IntPolynomial) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let p0 = p.squarefree_part();
        let mut chain = vec![p0.clone()];
        if p0.is_constant() {
            return Ok(SturmSequence { chain });
        }
        chain.push(p0.derivative().primitive_part());
        loop {
            let n = chain.len();
            let (a, b) = (&chain[n - 2], &chain[n - 1]);
            if b.is_constant() {
                break;
            }
            let mut r = a.pseudo_rem(b);
            let lc = b.leading().unwrap();
            let steps = a.deg0() - b.deg0() + 1;
            if lc.is_negative() && steps % 2 == 1 {
                r = -&r;
            }
            if r.is_zero() {
                break;
            }
            let g = r.content();
            let next = IntPolynomial::new(r.coeffs().iter().map(|c| -(c / &g)).collect());
            chain.push(next);
        }
        Ok(SturmSequence { chain })
    }

    /// The squarefree polynomial whose roots are counted.
    pub fn squarefree(&self) -> &IntPolynomial {
        &self.chain[0]
    }

    pub fn variations(&self, x: &Rational) -> usize {
        let mut count = 0;
        let mut last = Ordering::Equal;
        for p in &self.chain {
            let s = p.sign_at(x);
            if s == Ordering::Equal {
                continue;
            }
            if last != Ordering::Equal && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    /// Distinct real roots in the half-open interval `(l, u]`.
    pub fn count_half_open(&self, l: &Rational, u: &Rational) -> usize {
        self.variations(l).saturating_sub(self.variations(u))
    }

    /// Distinct real roots in the closed interval.
    pub fn count(&self, iv: &RatInterval) -> usize {
        let at_a = usize::from(self.squarefree().sign_at(iv.a()) == Ordering::Equal);
        at_a + self.count_half_open(iv.a(), iv.b())
    }

    /// Isolating intervals of width at most `width`, sorted and pairwise
    /// disjoint, one per distinct real root in `iv`.
    pub fn isolate(&self, iv: &RatInterval, width: &Rational) -> Vec<IsolatingInterval> {
        let p = self.squarefree();
        if p.is_constant() {
            return Vec::new();
        }
        let mut out = Vec::new();
        if p.sign_at(iv.a()) == Ordering::Equal {
            out.push(IsolatingInterval::exact(iv.a().clone()));
        }
        let mut stack = vec![(iv.a().clone(), iv.b().clone(), self.count_half_open(iv.a(), iv.b()))];
        while let Some((l, u, n)) = stack.pop() {
            match n {
                0 => {}
                1 => out.push(self.refine_half_open(l, u, width)),
                _ => {
                    let m = (&l + &u) / rational::int(2);
                    let left = self.count_half_open(&l, &m);
                    stack.push((m.clone(), u, n - left));
                    stack.push((l, m, left));
                }
            }
        }
        out.sort_by(|x, y| x.lo.cmp(&y.lo));
        self.separate(&mut out);
        out
    }

    /// The unique root in `(l, u]`, as an isolating interval of width at most
    /// `width`.
    fn refine_half_open(&self, l: Rational, u: Rational, width: &Rational) -> IsolatingInterval {
        let p = self.squarefree();
        if p.sign_at(&u) == Ordering::Equal {
            return IsolatingInterval::exact(u);
        }
        let iv = IsolatingInterval { lo: l, hi: u };
        let iv = self.snap(iv);
        refine_by_sign(p, iv, width)
    }

    /// Replace an interval by the exact root when the simplest rational in it
    /// is a root.
    fn snap(&self, iv: IsolatingInterval) -> IsolatingInterval {
        snap_to_rational(self.squarefree(), iv)
    }

    /// Shrink neighbours that touch until the closed intervals are disjoint.
    fn separate(&self, ivs: &mut [IsolatingInterval]) {
        let p = self.squarefree();
        for i in 1..ivs.len() {
            while ivs[i - 1].hi >= ivs[i].lo {
                let target = if ivs[i - 1].width() >= ivs[i].width() { i - 1 } else { i };
                let w = ivs[target].width() / rational::int(2);
                ivs[target] = refine_by_sign(p, ivs[target].clone(), &w);
            }
        }
    }
}

fn snap_to_rational(p: &IntPolynomial, iv: IsolatingInterval) -> IsolatingInterval {
    if iv.is_exact() {
        return iv;
    }
    let s = simplest_in(&iv.lo, &iv.hi);
    if s != iv.lo && p.sign_at(&s) == Ordering::Equal {
        IsolatingInterval::exact(s)
    } else {
        iv
    }
}

/// Bisect an interval holding one simple root of `p` (with `p(hi) != 0`)
/// until its width is at most `width`.
pub(crate) fn refine_by_sign(p: &IntPolynomial, mut iv: IsolatingInterval, width: &Rational) -> IsolatingInterval {
    if iv.is_exact() {
        return iv;
    }
    let s_hi = p.sign_at(&iv.hi);
    debug_assert!(s_hi != Ordering::Equal);
    let mut steps = 0u32;
    while &iv.width() > width {
        let m = iv.mid();
        let s = p.sign_at(&m);
        if s == Ordering::Equal {
            return IsolatingInterval::exact(m);
        }
        if s == s_hi {
            iv.hi = m;
        } else {
            iv.lo = m;
        }
        steps += 1;
        if steps.is_multiple_of(16) {
            iv = snap_to_rational(p, iv);
            if iv.is_exact() {
                return iv;
            }
        }
    }
    iv
}

/// Number of distinct real roots of `p` in the closed interval.
pub fn sturm_count(p: &IntPolynomial, iv: &RatInterval) -> Result<usize> {
    Ok(SturmSequence::new(p)?.count(iv))
}

/// Disjoint isolating intervals of width at most `width`, one per distinct
/// real root of `p` in `iv`.
pub fn isolate_roots(p: &IntPolynomial, iv: &RatInterval, width: &Rational) -> Result<Vec<IsolatingInterval>> {
    Ok(SturmSequence::new(p)?.isolate(iv, width))
}

/// `[-B, B]` containing every real root of `p` (Cauchy bound).
pub fn root_bound(p: &IntPolynomial) -> Result<RatInterval> {
    let lc = p.leading().ok_or(Error::ZeroPolynomial)?.abs();
    let m = p.coeffs().iter().map(|c| c.abs()).max().unwrap();
    let b = Rational::new(m, lc) + Rational::one();
    RatInterval::new(-b.clone(), b)
}

/// All real roots of `p`.
pub fn real_roots(p: &IntPolynomial, width: &Rational) -> Result<Vec<IsolatingInterval>> {
    isolate_roots(p, &root_bound(p)?, width)
}

/// All distinct rational roots of `p`, ascending.
pub fn rational_roots(p: &IntPolynomial) -> Result<Vec<Rational>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.is_constant() {
        return Ok(Vec::new());
    }
    let seq = SturmSequence::new(p)?;
    let sq = seq.squarefree();
    // Two distinct fractions with denominators <= L differ by >= 1/L^2, so at
    // this width the simplest rational of an interval is the only candidate.
    let lc = sq.leading().unwrap().abs();
    let width = Rational::new(BigInt::one(), &lc * &lc * 2);
    let mut out = Vec::new();
    for iv in seq.isolate(&root_bound(sq)?, &width) {
        let s = if iv.is_exact() { iv.lo.clone() } else { simplest_in(&iv.lo, &iv.hi) };
        if sq.sign_at(&s) == Ordering::Equal && s.denom() <= &lc {
            out.push(s);
        }
    }
    Ok(out)
}

/// Splits `p` into primitive linear factors `(q x - r)` (with multiplicity)
/// for each rational root, followed by the remaining cofactor when it is not
/// constant.
pub fn split_rational_roots(p: &IntPolynomial) -> Result<Vec<IntPolynomial>> {
    let mut rest = p.primitive_part();
    let mut out = Vec::new();
    for r in rational_roots(p)? {
        let lin = IntPolynomial::new(vec![-r.numer().clone(), r.denom().clone()]);
        while let Some(q) = rest.div_exact(&lin) {
            out.push(lin.clone());
            rest = q;
        }
    }
    if !rest.is_constant() {
        out.push(rest.primitive_part());
    }
    Ok(out)
}

/// Rational upper bound for `sup |p|` on `[lo, hi]`.
fn sup_abs_on(p: &IntPolynomial, lo: &Rational, hi: &Rational) -> Rational {
    let radius = lo.abs().max(hi.abs());
    p.abs_bound(&radius)
}

fn target_width(prec: u32) -> Rational {
    rational::pow2(-(prec as i64))
}

/// Rigorous enclosure of `max_{x in I} |p(x)|` at the default precision.
pub fn supnorm(p: &IntPolynomial, iv: &RatInterval) -> Result<RealEnclosure> {
    supnorm_with_precision(p, iv, DEFAULT_PRECISION)
}

pub fn supnorm_with_precision(p: &IntPolynomial, iv: &RatInterval, prec: u32) -> Result<RealEnclosure> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let at = |x: &Rational| RealEnclosure::from_rational(&p.eval_rational(x).abs(), prec);
    let mut best = at(iv.a()).max(&at(iv.b()));
    let dp = p.derivative();
    if dp.is_zero() {
        return Ok(best);
    }
    let seq = SturmSequence::new(&dp)?;
    let initial = iv.width() / rational::int(64) + target_width(prec);
    let ddp = seq.squarefree().clone();
    let values: Vec<RealEnclosure> = seq
        .isolate(iv, &initial)
        .into_par_iter()
        .map(|root| {
            if root.is_exact() {
                return at(&root.lo);
            }
            let mut root = root;
            loop {
                let m = root.mid();
                let v = p.eval_rational(&m);
                let half = root.width() / rational::int(2);
                let err = sup_abs_on(&dp, &root.lo, &root.hi) * &half;
                let scale = v.abs().max(target_width(prec));
                if err <= &scale * target_width(prec) || root.is_exact() {
                    return RealEnclosure::from_rational(&v, prec).widen(&err).abs();
                }
                root = refine_by_sign(&ddp, root, &half);
                if root.is_exact() {
                    return at(&root.lo);
                }
            }
        })
        .collect();
    for v in values {
        best = best.max(&v);
    }
    Ok(best)
}

/// One factor `f^exp` of a [`WeightedProduct`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factor {
    #[serde(rename = "coeffs")]
    pub poly: IntPolynomial,
    pub exp: u64,
}

/// `prod f_i^{e_i}` kept in factored form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawProduct", into = "RawProduct")]
pub struct WeightedProduct {
    factors: Vec<Factor>,
}

#[derive(Serialize, Deserialize)]
struct RawProduct {
    factors: Vec<Factor>,
}

impl TryFrom<RawProduct> for WeightedProduct {
    type Error = Error;
    fn try_from(raw: RawProduct) -> Result<Self> {
        WeightedProduct::new(raw.factors.into_iter().map(|f| (f.poly, f.exp)).collect())
    }
}

impl From<WeightedProduct> for RawProduct {
    fn from(p: WeightedProduct) -> Self {
        RawProduct { factors: p.factors }
    }
}

impl WeightedProduct {
    pub fn new(factors: Vec<(IntPolynomial, u64)>) -> Result<Self> {
        let mut out: Vec<Factor> = Vec::with_capacity(factors.len());
        let mut total: u64 = 0;
        for (poly, exp) in factors {
            if poly.is_constant() {
                return Err(Error::InvalidArgument(format!("constant factor {poly}")));
            }
            if exp == 0 {
                return Err(Error::InvalidArgument(format!("zero exponent on {poly}")));
            }
            if out.iter().any(|f| f.poly == poly) {
                return Err(Error::InvalidArgument(format!("repeated factor {poly}")));
            }
            total = (poly.deg0() as u64)
                .checked_mul(exp)
                .and_then(|d| total.checked_add(d))
                .ok_or_else(|| Error::InvalidArgument("total degree overflows 64 bits".into()))?;
            out.push(Factor { poly, exp });
        }
        Ok(WeightedProduct { factors: out })
    }

    pub fn empty() -> Self {
        WeightedProduct { factors: Vec::new() }
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// `D = sum e_i deg f_i`.
    pub fn total_degree(&self) -> u64 {
        self.factors.iter().map(|f| f.poly.deg0() as u64 * f.exp).sum()
    }

    pub(crate) fn log_sum(&self) -> LogSum {
        LogSum::new(
            self.factors.iter().map(|f| f.poly.clone()).collect(),
            self.factors.iter().map(|f| Rational::from_integer(BigInt::from(f.exp))).collect(),
        )
    }

    /// Enclosure of `sum e_i log|f_i(x)|`; `None` when some factor vanishes.
    pub fn log_eval(&self, x: &Rational, prec: u32) -> Option<RealEnclosure> {
        self.log_sum().eval(x, prec)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("weighted product: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }
}

/// Critical points of a log-sum on a domain: the domain endpoints plus
/// isolating intervals for the interior stationary points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalPointSet {
    pub domain: RatInterval,
    pub interior: Vec<IsolatingInterval>,
}

impl CriticalPointSet {
    /// Representative rational points: endpoints, then interval midpoints.
    pub fn points(&self) -> Vec<Rational> {
        let mut pts = vec![self.domain.a().clone()];
        pts.extend(self.interior.iter().map(IsolatingInterval::mid));
        pts.push(self.domain.b().clone());
        pts
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CandidateKind {
    Endpoint,
    Critical,
}

/// One maximizer candidate with the enclosure of the log-sum there.
#[derive(Clone, Debug, Serialize)]
pub struct Candidate {
    pub kind: CandidateKind,
    /// Where the candidate lies; a point when known exactly.
    #[serde(serialize_with = "ser_interval")]
    pub point: IsolatingInterval,
    pub value: RealEnclosure,
}

fn ser_interval<S: serde::Serializer>(iv: &IsolatingInterval, s: S) -> std::result::Result<S::Ok, S::Error> {
    [iv.lo.to_string(), iv.hi.to_string()].serialize(s)
}

/// Result of maximizing a log-sum over a domain.
#[derive(Clone, Debug)]
pub struct LogMax {
    pub value: RealEnclosure,
    pub candidates: Vec<Candidate>,
    /// Endpoints skipped because some factor vanishes there.
    pub skipped: Vec<Rational>,
}

impl LogMax {
    /// The candidate with the largest upper bound.
    pub fn argmax(&self) -> &Candidate {
        self.candidates
            .iter()
            .max_by(|a, b| a.value.hi().cmp(b.value.hi()))
            .expect("at least one candidate")
    }
}

/// `sum w_i log|f_i(x)|` with positive rational weights.
#[derive(Clone, Debug)]
pub(crate) struct LogSum {
    factors: Vec<IntPolynomial>,
    weights: Vec<Rational>,
    derivs: Vec<IntPolynomial>,
    candidates: OnceLock<std::result::Result<SturmSequence, Error>>,
}

impl LogSum {
    pub(crate) fn new(factors: Vec<IntPolynomial>, weights: Vec<Rational>) -> Self {
        let (factors, weights): (Vec<_>, Vec<_>) = factors
            .into_iter()
            .zip(weights)
            .filter(|(_, w)| !w.is_zero())
            .unzip();
        let derivs = factors.iter().map(IntPolynomial::derivative).collect();
        LogSum { factors, weights, derivs, candidates: OnceLock::new() }
    }

    pub(crate) fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Integer numerator of the derivative: a positive multiple of
    /// `sum w_i f_i' prod_{j != i} f_j`.
    pub(crate) fn numerator(&self) -> IntPolynomial {
        let n = self.factors.len();
        if n == 0 {
            return IntPolynomial::zero();
        }
        let l = rational::lcm_all(self.weights.iter().map(|w| w.denom()));
        let mut prefix = vec![IntPolynomial::one()];
        for f in &self.factors {
            let next = prefix.last().unwrap() * f;
            prefix.push(next);
        }
        let mut suffix = IntPolynomial::one();
        let mut acc = IntPolynomial::zero();
        for i in (0..n).rev() {
            let w = (&self.weights[i] * Rational::from_integer(l.clone())).to_integer();
            let term = &(&prefix[i] * &suffix) * &self.derivs[i];
            acc = &acc + &term.scale(&w);
            suffix = &suffix * &self.factors[i];
        }
        acc
    }

    /// Sturm sequence for the stationary points that are not factor roots.
    fn candidate_sequence(&self) -> Result<&SturmSequence> {
        self.candidates
            .get_or_init(|| {
                let num = self.numerator();
                if num.is_zero() {
                    return Err(Error::Degenerate("derivative numerator vanishes identically".into()));
                }
                let sq = num.squarefree_part();
                let f_sq = crate::poly::product(&self.factors).squarefree_part();
                let g = sq.gcd(&f_sq);
                let cleaned = if g.is_constant() { sq } else { sq.div_exact(&g).expect("gcd divides") };
                SturmSequence::new(&cleaned)
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    pub(crate) fn critical_points(&self, iv: &RatInterval, width: &Rational) -> Result<CriticalPointSet> {
        let seq = self.candidate_sequence()?;
        Ok(CriticalPointSet { domain: iv.clone(), interior: seq.isolate(iv, width) })
    }

    pub(crate) fn eval(&self, x: &Rational, prec: u32) -> Option<RealEnclosure> {
        let mut acc = RealEnclosure::from_int(0, prec);
        for (f, w) in self.factors.iter().zip(&self.weights) {
            let v = f.eval_rational(x).abs();
            if v.is_zero() {
                return None;
            }
            let l = RealEnclosure::ln_rational(&v, prec).ok()?;
            let term = if w.is_integer() { l.mul_int(w.numer()) } else { l.mul_rational(w) };
            acc = acc.add(&term);
        }
        Some(acc)
    }

    /// Bound on `|d/dx log-sum|` over `[lo, hi]`, or `None` if some factor
    /// may vanish there.
    fn lipschitz(&self, lo: &Rational, hi: &Rational) -> Option<Rational> {
        let mid = (lo + hi) / rational::int(2);
        let half = (hi - lo) / rational::int(2);
        let mut total = Rational::zero();
        for ((f, df), w) in self.factors.iter().zip(&self.derivs).zip(&self.weights) {
            let slope = sup_abs_on(df, lo, hi);
            let floor = f.eval_rational(&mid).abs() - &slope * &half;
            if !floor.is_positive() {
                return None;
            }
            total += w * slope / floor;
        }
        Some(total)
    }

    /// Enclosure of the log-sum at the unique stationary point inside `root`.
    fn eval_critical(&self, root: IsolatingInterval, prec: u32) -> Result<Candidate> {
        let seq = self.candidate_sequence()?;
        let p = seq.squarefree();
        let target = rational::pow2(-((prec / 2) as i64));
        let floor_width = rational::pow2(-(8 * prec as i64));
        let mut root = root;
        loop {
            if root.is_exact() {
                let value = self
                    .eval(&root.lo, prec)
                    .ok_or_else(|| Error::Degenerate("stationary point is a factor root".into()))?;
                return Ok(Candidate { kind: CandidateKind::Critical, point: root, value });
            }
            let half = root.width() / rational::int(2);
            let extra_steps = match self.lipschitz(&root.lo, &root.hi) {
                Some(l) => {
                    let err = &l * &half;
                    if err <= target {
                        let m = root.mid();
                        let value = self
                            .eval(&m, prec)
                            .ok_or_else(|| Error::Degenerate("midpoint is a factor root".into()))?
                            .widen(&err);
                        return Ok(Candidate { kind: CandidateKind::Critical, point: root, value });
                    }
                    let ratio = err / &target;
                    (ratio.numer().bits() as i64 - ratio.denom().bits() as i64 + 2).max(1) as u32
                }
                None => 8,
            };
            if root.width() < floor_width {
                return Err(Error::Undecided(prec));
            }
            let w = root.width() * rational::pow2(-(extra_steps as i64));
            root = refine_by_sign(p, root, &w);
        }
    }

    /// Rigorous enclosure of the maximum over `iv`, with per-candidate
    /// evidence.
    pub(crate) fn max_on(&self, iv: &RatInterval, prec: u32) -> Result<LogMax> {
        if self.is_empty() {
            let zero = RealEnclosure::from_int(0, prec);
            let c = Candidate { kind: CandidateKind::Endpoint, point: IsolatingInterval::exact(iv.a().clone()), value: zero.clone() };
            return Ok(LogMax { value: zero, candidates: vec![c], skipped: Vec::new() });
        }
        let mut candidates = Vec::new();
        let mut skipped = Vec::new();
        let mut endpoints = vec![iv.a().clone()];
        if !iv.is_degenerate() {
            endpoints.push(iv.b().clone());
        }
        for x in endpoints {
            match self.eval(&x, prec) {
                Some(value) => candidates.push(Candidate { kind: CandidateKind::Endpoint, point: IsolatingInterval::exact(x), value }),
                None => skipped.push(x),
            }
        }
        let width = iv.width() / rational::int(64) + target_width(prec);
        let crit = self.critical_points(iv, &width)?;
        let evaluated: Vec<Result<Candidate>> =
            crit.interior.into_par_iter().map(|root| self.eval_critical(root, prec)).collect();
        for c in evaluated {
            candidates.push(c?);
        }
        if candidates.is_empty() {
            return Err(Error::Degenerate("every candidate point is a factor root".into()));
        }
        let value = candidates.iter().skip(1).fold(candidates[0].value.clone(), |acc, c| acc.max(&c.value));
        candidates.sort_by(|a, b| a.point.lo.cmp(&b.point.lo));
        Ok(LogMax { value, candidates, skipped })
    }
}

/// Critical points of `sum e_i log|f_i|` on `iv`: the endpoints plus
/// isolating intervals for the real roots of the derivative numerator that
/// are not roots of any factor.
pub fn critical_points_weighted(p: &WeightedProduct, iv: &RatInterval) -> Result<CriticalPointSet> {
    let width = iv.width() / rational::int(1024) + target_width(DEFAULT_PRECISION);
    p.log_sum().critical_points(iv, &width)
}

/// Rigorous enclosure of `max_{x in I} sum e_i log|f_i(x)|`.
pub fn log_supnorm_weighted(p: &WeightedProduct, iv: &RatInterval) -> Result<RealEnclosure> {
    log_supnorm_weighted_with_precision(p, iv, DEFAULT_PRECISION)
}

pub fn log_supnorm_weighted_with_precision(p: &WeightedProduct, iv: &RatInterval, prec: u32) -> Result<RealEnclosure> {
    Ok(log_supnorm_weighted_evidence(p, iv, prec)?.value)
}

/// As [`log_supnorm_weighted`], returning the per-candidate evidence.
///
/// Exponents are divided by their gcd before the search and the result is
/// scaled back exactly, so `{(p, e)}` yields exactly `e` times `{(p, 1)}`.
pub fn log_supnorm_weighted_evidence(p: &WeightedProduct, iv: &RatInterval, prec: u32) -> Result<LogMax> {
    let g = p.factors().iter().fold(BigInt::zero(), |acc, f| acc.gcd(&BigInt::from(f.exp)));
    if g.is_zero() || g.is_one() {
        return p.log_sum().max_on(iv, prec);
    }
    let reduced = LogSum::new(
        p.factors().iter().map(|f| f.poly.clone()).collect(),
        p.factors().iter().map(|f| Rational::from_integer(BigInt::from(f.exp) / &g)).collect(),
    );
    let mut out = reduced.max_on(iv, prec)?;
    out.value = out.value.mul_int(&g);
    for c in &mut out.candidates {
        c.value = c.value.mul_int(&g);
    }
    Ok(out)
}

/// Maximum of `sum w_i log|f_i|` for positive rational weights.
pub fn log_supnorm_rational_weights(
    factors: &[IntPolynomial],
    weights: &[Rational],
    iv: &RatInterval,
    prec: u32,
) -> Result<LogMax> {
    LogSum::new(factors.to_vec(), weights.to_vec()).max_on(iv, prec)
}

/// Critical points of `sum w_i log|f_i|` for positive rational weights.
pub fn critical_points_rational_weights(
    factors: &[IntPolynomial],
    weights: &[Rational],
    iv: &RatInterval,
) -> Result<CriticalPointSet> {
    let width = iv.width() / rational::int(1024) + target_width(DEFAULT_PRECISION);
    LogSum::new(factors.to_vec(), weights.to_vec()).critical_points(iv, &width)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::chebyshev_t;
    use crate::rational::{int, rat};
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    fn iv(a: Rational, b: Rational) -> RatInterval {
        RatInterval::new(a, b).unwrap()
    }

    #[test]
    fn sturm_count_examples() {
        assert_eq!(sturm_count(&p(&[-1, 2]), &iv(int(0), int(1))).unwrap(), 1);
        assert_eq!(sturm_count(&p(&[1, -3, 1]), &iv(int(0), int(1))).unwrap(), 1);
        assert_eq!(sturm_count(&p(&[1, 0, 1]), &iv(int(-2), int(2))).unwrap(), 0);
        assert!(sturm_count(&IntPolynomial::zero(), &iv(int(0), int(1))).is_err());
        // Roots on both endpoints are counted.
        assert_eq!(sturm_count(&p(&[0, -1, 1]), &iv(int(0), int(1))).unwrap(), 2);
    }

    #[test]
    fn isolation_examples() {
        let r = isolate_roots(&p(&[-1, 2]), &iv(int(0), int(1)), &rat(1, 64)).unwrap();
        assert_eq!(r.len(), 1);
        assert!(r[0].contains(&rat(1, 2)) && r[0].width() <= rat(1, 64));

        let beta3 = (3.0 - 5f64.sqrt()) / 2.0;
        let r = isolate_roots(&p(&[1, -3, 1]), &iv(int(0), int(1)), &rat(1, 1024)).unwrap();
        assert_eq!(r.len(), 1);
        let (lo, hi) = (rational::to_f64(&r[0].lo), rational::to_f64(&r[0].hi));
        assert!(lo <= beta3 && beta3 <= hi && hi - lo <= 1.0 / 1024.0);

        let r = isolate_roots(&p(&[0, 0, 0, 1]), &iv(int(-1), int(1)), &rat(1, 4)).unwrap();
        assert_eq!(r.len(), 1);
        assert!(r[0].contains(&int(0)));
    }

    #[test]
    fn rational_roots_are_found_exactly() {
        // (3x - 1)(x + 2)(x^2 - 2)
        let f = &(&p(&[-1, 3]) * &p(&[2, 1])) * &p(&[-2, 0, 1]);
        assert_eq!(rational_roots(&f).unwrap(), vec![int(-2), rat(1, 3)]);
        let parts = split_rational_roots(&(&f * &p(&[2, 1]))).unwrap();
        assert_eq!(parts, vec![p(&[2, 1]), p(&[2, 1]), p(&[-1, 3]), p(&[-2, 0, 1])]);
    }

    #[test]
    fn supnorm_examples() {
        let e = supnorm(&p(&[0, 1, -1]), &iv(int(0), int(1))).unwrap();
        assert!(e.contains(&rat(1, 4)));
        assert!(e.width() < rational::pow2(-64));
        let e = supnorm(&p(&[0, 1]), &iv(int(0), rat(1, 5))).unwrap();
        assert!(e.contains(&rat(1, 5)) && e.width() < rational::pow2(-250));
        let e = supnorm(&chebyshev_t(2), &iv(int(-1), int(1))).unwrap();
        assert!(e.contains(&int(1)));
    }

    #[test]
    fn endpoint_root_is_not_duplicated() {
        // p'(0) = 0 and 0 is also the simplest rational in [0, 7/5].
        let f = p(&[-6, 0, -6, 6, -1, 3]);
        let d = f.derivative();
        let r = isolate_roots(&d, &iv(int(0), rat(7, 5)), &rat(1, 64)).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(r[0], IsolatingInterval::exact(int(0)));
        assert!(supnorm(&f, &iv(int(0), rat(7, 5))).is_ok());
    }

    #[test]
    fn supnorm_irrational_maximizer() {
        // x^3 - x on [0, 1]: max |.| at 1/sqrt(3), value 2/(3 sqrt 3).
        let e = supnorm(&p(&[0, -1, 0, 1]), &iv(int(0), int(1))).unwrap();
        let exact = 2.0 / (3.0 * 3f64.sqrt());
        assert!((e.mid_f64() - exact).abs() < 1e-15);
        assert!(e.width() < rational::pow2(-64) * rat(1, 2));
    }

    #[test]
    fn log_sup_examples() {
        let x = WeightedProduct::new(vec![(p(&[0, 1]), 1)]).unwrap();
        let e = log_supnorm_weighted(&x, &iv(int(0), rat(1, 3))).unwrap();
        let ln3 = RealEnclosure::ln_rational(&rat(1, 3), 256).unwrap();
        assert!(e.cmp_definite(&ln3).is_none());

        let p3 = WeightedProduct::new(vec![(p(&[0, 1]), 7), (p(&[1, -3, 1]), 1)]).unwrap();
        let e = log_supnorm_weighted(&p3, &iv(int(0), rat(7, 18))).unwrap();
        let target = RealEnclosure::ln_rational(&rat(1, 3), 256).unwrap().mul_int(&BigInt::from(9));
        assert!(e.cmp_definite(&target).is_none());
        assert!(e.width() < rational::pow2(-100));

        let empty = log_supnorm_weighted(&WeightedProduct::empty(), &iv(int(0), int(1))).unwrap();
        assert!(empty.contains(&int(0)));
    }

    #[test]
    fn log_sup_degenerate() {
        // x^2 on the single point 0: every candidate is a factor root.
        let x2 = WeightedProduct::new(vec![(p(&[0, 1]), 2)]).unwrap();
        assert!(matches!(log_supnorm_weighted(&x2, &iv(int(0), int(0))), Err(Error::Degenerate(_))));
    }

    #[test]
    fn critical_point_examples() {
        let sym = WeightedProduct::new(vec![(p(&[0, 1]), 1), (p(&[-1, 1]), 1)]).unwrap();
        let c = critical_points_weighted(&sym, &iv(int(0), int(1))).unwrap();
        assert_eq!(c.interior, vec![IsolatingInterval::exact(rat(1, 2))]);
        assert_eq!(c.points(), vec![int(0), rat(1, 2), int(1)]);

        let p3 = WeightedProduct::new(vec![(p(&[0, 1]), 7), (p(&[1, -3, 1]), 1)]).unwrap();
        let c = critical_points_weighted(&p3, &iv(int(0), rat(1, 2))).unwrap();
        assert!(c.interior.iter().any(|r| r.contains(&rat(1, 3))));

        let mono = WeightedProduct::new(vec![(p(&[0, 1]), 3)]).unwrap();
        assert!(critical_points_weighted(&mono, &iv(int(0), int(1))).unwrap().interior.is_empty());

        assert!(matches!(
            critical_points_weighted(&WeightedProduct::empty(), &iv(int(0), int(1))),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn weighted_product_validation_and_json() {
        assert!(WeightedProduct::new(vec![(p(&[3]), 1)]).is_err());
        assert!(WeightedProduct::new(vec![(p(&[0, 1]), 0)]).is_err());
        assert!(WeightedProduct::new(vec![(p(&[0, 1]), 1), (p(&[0, 1]), 2)]).is_err());
        assert!(WeightedProduct::new(vec![(p(&[0, 1]), u64::MAX), (p(&[1, 1]), 1)]).is_err());
        let w = WeightedProduct::new(vec![(p(&[0, 1]), 640), (p(&[2, -31, 179, -456, 432, 1]), 47)]).unwrap();
        assert_eq!(w.total_degree(), 640 + 235);
        let json = w.to_json();
        assert_eq!(json, r#"{"factors":[{"coeffs":["0","1"],"exp":640},{"coeffs":["2","-31","179","-456","432","1"],"exp":47}]}"#);
        assert_eq!(WeightedProduct::from_json(&json).unwrap(), w);
        assert!(WeightedProduct::from_json(r#"{"factors":[{"coeffs":["5"],"exp":1}]}"#).is_err());
    }

    #[test]
    fn multiplicativity_is_exact() {
        let f = p(&[1, -3, 1]);
        let i = iv(int(0), rat(1, 2));
        let one = log_supnorm_weighted(&WeightedProduct::new(vec![(f.clone(), 1)]).unwrap(), &i).unwrap();
        let five = log_supnorm_weighted(&WeightedProduct::new(vec![(f, 5)]).unwrap(), &i).unwrap();
        assert_eq!(five, one.mul_int(&BigInt::from(5)));
    }

    fn arb_poly(max_deg: usize) -> impl Strategy<Value = IntPolynomial> {
        prop::collection::vec(-10i64..=10, 2..=max_deg + 1)
            .prop_map(|c| IntPolynomial::from_i64s(&c))
            .prop_filter("non-constant", |p| !p.is_constant())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn count_matches_isolation(f in arb_poly(10), a in -30i64..30, w in 1i64..40) {
            let i = iv(rat(a, 10), rat(a + w, 10));
            let n = sturm_count(&f, &i).unwrap();
            let roots = isolate_roots(&f, &i, &rat(1, 100)).unwrap();
            prop_assert_eq!(n, roots.len());
            for pair in roots.windows(2) {
                prop_assert!(pair[0].hi < pair[1].lo);
            }
            for r in &roots {
                prop_assert!(i.contains(&r.lo) && i.contains(&r.hi));
                prop_assert!(r.width() <= rat(1, 100));
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn single_factor_log_matches_supnorm(f in arb_poly(6), b in 1i64..20) {
            let i = iv(int(0), rat(b, 10));
            let wp = WeightedProduct::new(vec![(f.clone(), 1)]).unwrap();
            match log_supnorm_weighted(&wp, &i) {
                Ok(l) => {
                    let s = supnorm(&f, &i).unwrap();
                    let ls = s.ln().unwrap();
                    let tol = rational::pow2(-60);
                    prop_assert!(l.lo_rational() <= ls.hi_rational() + &tol);
                    prop_assert!(ls.lo_rational() <= l.hi_rational() + &tol);
                }
                Err(Error::Degenerate(_)) => {}
                Err(e) => prop_assert!(false, "unexpected error {e}"),
            }
        }
    }
}
