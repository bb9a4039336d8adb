//! Rigorous real enclosures with dyadic endpoints and outward rounding.
//!
//! Every operation returns an interval that contains the exact result of the
//! same operation applied to any reals inside the inputs. Endpoints are kept
//! to roughly `precision` significant bits; rounding always moves `lo` down
//! and `hi` up.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

pub const DEFAULT_PRECISION: u32 = 256;
pub const MAX_PRECISION: u32 = 16384;

/// Guard bits added to internal fixed-point series evaluations.
const GUARD_BITS: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Round {
    Down,
    Up,
}

/// `mant * 2^exp`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn new(mant: BigInt, exp: i64) -> Self {
        Dyadic { mant, exp }
    }

    pub fn from_int(n: BigInt) -> Self {
        Dyadic { mant: n, exp: 0 }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn to_rational(&self) -> Rational {
        Rational::from_integer(self.mant.clone()) * rational::pow2(self.exp)
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> Sign {
        self.mant.sign()
    }

    fn aligned(&self, other: &Self) -> (BigInt, BigInt, i64) {
        let e = self.exp.min(other.exp);
        let a = &self.mant << ((self.exp - e) as usize);
        let b = &other.mant << ((other.exp - e) as usize);
        (a, b, e)
    }

    fn add(&self, other: &Self) -> Self {
        let (a, b, e) = self.aligned(other);
        Dyadic::new(a + b, e)
    }

    fn neg(&self) -> Self {
        Dyadic::new(-&self.mant, self.exp)
    }

    fn mul(&self, other: &Self) -> Self {
        Dyadic::new(&self.mant * &other.mant, self.exp + other.exp)
    }

    /// Keep at most `prec` mantissa bits, rounding in direction `dir`.
    fn round(&self, prec: u32, dir: Round) -> Self {
        let bits = self.mant.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let shift = (bits - prec as u64) as usize;
        let d = BigInt::one() << shift;
        let m = match dir {
            Round::Down => self.mant.div_floor(&d),
            Round::Up => self.mant.div_ceil(&d),
        };
        Dyadic::new(m, self.exp + shift as i64)
    }

    /// Round an exact rational to `prec` significant bits.
    fn from_rational(r: &Rational, prec: u32, dir: Round) -> Self {
        if r.is_zero() {
            return Dyadic::zero();
        }
        let e = r.numer().bits() as i64 - r.denom().bits() as i64;
        let s = prec as i64 - e;
        let (num, den) = if s >= 0 {
            (r.numer() << (s as usize), r.denom().clone())
        } else {
            (r.numer().clone(), r.denom() << ((-s) as usize))
        };
        let m = match dir {
            Round::Down => num.div_floor(&den),
            Round::Up => num.div_ceil(&den),
        };
        Dyadic::new(m, -s)
    }

    pub fn to_f64(&self) -> f64 {
        rational::to_f64(&self.to_rational())
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

/// Closed interval `[lo, hi]` of dyadic rationals containing an exact real.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealEnclosure {
    lo: Dyadic,
    hi: Dyadic,
    precision: u32,
}

impl RealEnclosure {
    fn from_parts(lo: Dyadic, hi: Dyadic, precision: u32) -> Self {
        debug_assert!(lo <= hi, "enclosure endpoints out of order");
        RealEnclosure { lo: lo.round(precision, Round::Down), hi: hi.round(precision, Round::Up), precision }
    }

    /// Smallest enclosure of a rational at the given precision.
    pub fn from_rational(r: &Rational, precision: u32) -> Self {
        RealEnclosure {
            lo: Dyadic::from_rational(r, precision, Round::Down),
            hi: Dyadic::from_rational(r, precision, Round::Up),
            precision,
        }
    }

    pub fn from_int(n: i64, precision: u32) -> Self {
        Self::from_rational(&rational::int(n), precision)
    }

    /// Enclosure with explicitly given rational bounds (rounded outward).
    pub fn from_bounds(lo: &Rational, hi: &Rational, precision: u32) -> Self {
        assert!(lo <= hi, "from_bounds: lo > hi");
        RealEnclosure {
            lo: Dyadic::from_rational(lo, precision, Round::Down),
            hi: Dyadic::from_rational(hi, precision, Round::Up),
            precision,
        }
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn lo_rational(&self) -> Rational {
        self.lo.to_rational()
    }

    pub fn hi_rational(&self) -> Rational {
        self.hi.to_rational()
    }

    pub fn mid(&self) -> Rational {
        (self.lo_rational() + self.hi_rational()) / rational::int(2)
    }

    pub fn width(&self) -> Rational {
        self.hi_rational() - self.lo_rational()
    }

    pub fn contains(&self, r: &Rational) -> bool {
        &self.lo_rational() <= r && r <= &self.hi_rational()
    }

    pub fn contains_enclosure(&self, other: &Self) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn mid_f64(&self) -> f64 {
        rational::to_f64(&self.mid())
    }

    /// `Some(ordering)` when the two enclosures are separated (or both are the
    /// same single point); `None` when they overlap.
    pub fn cmp_definite(&self, other: &Self) -> Option<Ordering> {
        if self.hi < other.lo {
            Some(Ordering::Less)
        } else if self.lo > other.hi {
            Some(Ordering::Greater)
        } else if self.lo == self.hi && other.lo == other.hi && self.lo == other.lo {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Certainly `self <= other`.
    pub fn definitely_le(&self, other: &Self) -> bool {
        self.hi <= other.lo
    }

    /// Certainly `self < other`.
    pub fn definitely_lt(&self, other: &Self) -> bool {
        self.hi < other.lo
    }

    pub fn add(&self, other: &Self) -> Self {
        let p = self.precision.max(other.precision);
        Self::from_parts(self.lo.add(&other.lo), self.hi.add(&other.hi), p)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        RealEnclosure { lo: self.hi.neg(), hi: self.lo.neg(), precision: self.precision }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let p = self.precision.max(other.precision);
        let prods = [
            self.lo.mul(&other.lo),
            self.lo.mul(&other.hi),
            self.hi.mul(&other.lo),
            self.hi.mul(&other.hi),
        ];
        let lo = prods.iter().min().unwrap().clone();
        let hi = prods.iter().max().unwrap().clone();
        Self::from_parts(lo, hi, p)
    }

    /// Exact multiplication by an integer; no rounding is applied, so
    /// `e * enc` is reproducible bit for bit.
    pub fn mul_int(&self, k: &BigInt) -> Self {
        let k = Dyadic::from_int(k.clone());
        let (a, b) = (self.lo.mul(&k), self.hi.mul(&k));
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        RealEnclosure { lo, hi, precision: self.precision }
    }

    pub fn mul_rational(&self, r: &Rational) -> Self {
        self.mul(&Self::from_rational(r, self.precision))
    }

    pub fn recip(&self) -> Result<Self> {
        if !self.lo.is_zero() && self.lo.signum() == self.hi.signum() {
            let p = self.precision;
            let lo = Dyadic::from_rational(&self.hi.to_rational().recip(), p, Round::Down);
            let hi = Dyadic::from_rational(&self.lo.to_rational().recip(), p, Round::Up);
            Ok(RealEnclosure { lo, hi, precision: p })
        } else {
            Err(Error::InvalidArgument("reciprocal of an enclosure containing 0".into()))
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.recip()?))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::from_int(1, self.precision);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn abs(&self) -> Self {
        if self.lo.signum() != Sign::Minus {
            self.clone()
        } else if self.hi.signum() != Sign::Plus {
            self.neg()
        } else {
            let hi = self.hi.clone().max(self.lo.neg());
            RealEnclosure { lo: Dyadic::zero(), hi, precision: self.precision }
        }
    }

    /// Enclosure of `max(a, b)` for any reals `a in self`, `b in other`.
    pub fn max(&self, other: &Self) -> Self {
        RealEnclosure {
            lo: self.lo.clone().max(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
            precision: self.precision.max(other.precision),
        }
    }

    pub fn min(&self, other: &Self) -> Self {
        RealEnclosure {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().min(other.hi.clone()),
            precision: self.precision.max(other.precision),
        }
    }

    /// Widen both ends by a non-negative rational radius.
    pub fn widen(&self, radius: &Rational) -> Self {
        let p = self.precision;
        let r_up = Dyadic::from_rational(radius, p, Round::Up);
        Self::from_parts(self.lo.add(&r_up.neg()), self.hi.add(&r_up), p)
    }

    pub fn sqrt(&self) -> Result<Self> {
        if self.hi.signum() == Sign::Minus {
            return Err(Error::InvalidArgument("sqrt of a negative enclosure".into()));
        }
        let p = self.precision;
        let lo = if self.lo.signum() == Sign::Minus {
            Dyadic::zero()
        } else {
            sqrt_rounded(&self.lo.to_rational(), p, Round::Down)
        };
        let hi = sqrt_rounded(&self.hi.to_rational(), p, Round::Up);
        Ok(RealEnclosure { lo, hi, precision: p })
    }

    pub fn sqrt_rational(r: &Rational, precision: u32) -> Result<Self> {
        Self::from_rational(r, precision + 8).sqrt().map(|e| e.with_precision(precision))
    }

    /// Natural logarithm; requires the enclosure to be strictly positive.
    pub fn ln(&self) -> Result<Self> {
        if self.lo.signum() != Sign::Plus {
            return Err(Error::InvalidArgument("log of a non-positive enclosure".into()));
        }
        let p = self.precision;
        let (lo, _) = ln_bounds(&self.lo.to_rational(), p);
        let (_, hi) = ln_bounds(&self.hi.to_rational(), p);
        Ok(RealEnclosure { lo, hi, precision: p })
    }

    /// Natural logarithm of a positive rational.
    pub fn ln_rational(r: &Rational, precision: u32) -> Result<Self> {
        if !r.is_positive() {
            return Err(Error::InvalidArgument(format!("log of non-positive {r}")));
        }
        let (lo, hi) = ln_bounds(r, precision);
        Ok(RealEnclosure { lo, hi, precision })
    }

    /// `a^(-1/d)` for a positive integer `a`.
    pub fn inv_root(a: &BigInt, d: u32, precision: u32) -> Result<Self> {
        if !a.is_positive() || d == 0 {
            return Err(Error::InvalidArgument("inv_root needs a > 0, d > 0".into()));
        }
        let scale = precision as usize + 2;
        let num = BigInt::one() << (scale * d as usize);
        let t_lo = num.div_floor(a);
        let t_hi = num.div_ceil(a);
        let lo = t_lo.nth_root(d);
        let mut hi = t_hi.nth_root(d);
        if num_traits::pow(hi.clone(), d as usize) < t_hi {
            hi += 1;
        }
        let e = -(scale as i64);
        Ok(Self::from_parts(Dyadic::new(lo, e), Dyadic::new(hi, e), precision))
    }

    pub fn with_precision(&self, precision: u32) -> Self {
        Self::from_parts(self.lo.clone(), self.hi.clone(), precision)
    }

    /// Renders both ends with `digits` decimal places (lo truncated down,
    /// hi rounded up).
    pub fn to_decimal_pair(&self, digits: usize) -> (String, String) {
        let ulp = Rational::new(BigInt::one(), num_traits::pow(BigInt::from(10), digits));
        let lo = self.lo_rational();
        let lo_down = (&lo / &ulp).floor() * &ulp;
        let hi_up = (self.hi_rational() / &ulp).ceil() * &ulp;
        (rational::to_decimal(&lo_down, digits), rational::to_decimal(&hi_up, digits))
    }
}

impl fmt::Display for RealEnclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, hi) = self.to_decimal_pair(20);
        write!(f, "[{lo}, {hi}]")
    }
}

impl Serialize for RealEnclosure {
    /// `[lo, hi]` as exact rational strings.
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.lo_rational().to_string(), self.hi_rational().to_string()].serialize(s)
    }
}

/// Runs `attempt` at `start` bits, doubling up to `max` until it returns a
/// decision. `Err(bits)` reports the last precision tried.
pub fn escalate<T>(start: u32, max: u32, mut attempt: impl FnMut(u32) -> Option<T>) -> std::result::Result<(T, u32), u32> {
    let mut p = start.max(16);
    loop {
        if let Some(t) = attempt(p) {
            return Ok((t, p));
        }
        if p >= max {
            return Err(p);
        }
        p = (p * 2).min(max);
    }
}

fn sqrt_rounded(r: &Rational, prec: u32, dir: Round) -> Dyadic {
    if r.is_zero() {
        return Dyadic::zero();
    }
    let e = (r.numer().bits() as i64 - r.denom().bits() as i64) / 2;
    let s = prec as i64 - e + 1;
    // sqrt(r) * 2^s = sqrt(r * 4^s)
    let scaled = r * rational::pow2(2 * s);
    let m = match dir {
        Round::Down => scaled.floor().to_integer().sqrt(),
        Round::Up => {
            let t = scaled.ceil().to_integer();
            let root = t.sqrt();
            if &root * &root < t {
                root + 1
            } else {
                root
            }
        }
    };
    Dyadic::new(m, -s).round(prec, dir)
}

/// Lower and upper fixed-point sums (scaled by `2^p`) for `atanh(zn/zd)`,
/// `0 <= zn/zd < 1/2`.
fn atanh_fixed(zn: &BigInt, zd: &BigInt, p: usize) -> (BigInt, BigInt) {
    let scale = BigInt::one() << p;
    let z_lo = (zn << p).div_floor(zd);
    let z_hi = (zn << p).div_ceil(zd);
    if z_hi.is_zero() {
        return (BigInt::zero(), BigInt::zero());
    }
    let z2_lo = (&z_lo * &z_lo) >> p;
    let z2_hi = (&z_hi * &z_hi).div_ceil(&scale);
    let (mut pw_lo, mut pw_hi) = (z_lo, z_hi);
    let (mut sum_lo, mut sum_hi) = (BigInt::zero(), BigInt::zero());
    let mut j: u64 = 0;
    loop {
        let d = BigInt::from(2 * j + 1);
        sum_lo += pw_lo.div_floor(&d);
        sum_hi += pw_hi.div_ceil(&d);
        pw_lo = (&pw_lo * &z2_lo) >> p;
        pw_hi = (&pw_hi * &z2_hi).div_ceil(&scale);
        j += 1;
        if pw_hi <= BigInt::one() {
            // Remaining tail is at most z^(2j+1) / (1 - z^2) <= (4/3) ulp.
            sum_hi += 2;
            break;
        }
    }
    (sum_lo, sum_hi)
}

/// Dyadic bounds for `ln r`, `r > 0`.
fn ln_bounds(r: &Rational, prec: u32) -> (Dyadic, Dyadic) {
    let p = prec as usize + GUARD_BITS;
    let (num, den) = (r.numer(), r.denom());
    let mut k = num.bits() as i64 - den.bits() as i64;
    // m = r / 2^k with m in [1, 2)
    let (mut mn, mut md) = if k >= 0 {
        (num.clone(), den << (k as usize))
    } else {
        (num << ((-k) as usize), den.clone())
    };
    if mn < md {
        mn <<= 1;
        k -= 1;
    }
    if mn >= (&md << 1) {
        md <<= 1;
        k += 1;
    }
    let (t_lo, t_hi) = atanh_fixed(&(&mn - &md), &(&mn + &md), p);
    let (l2_lo, l2_hi) = atanh_fixed(&BigInt::one(), &BigInt::from(3), p);
    let kb = BigInt::from(k);
    let (kl_lo, kl_hi) = if k >= 0 {
        (&kb * &l2_lo * 2, &kb * &l2_hi * 2)
    } else {
        (&kb * &l2_hi * 2, &kb * &l2_lo * 2)
    };
    let lo = Dyadic::new(kl_lo + t_lo * 2, -(p as i64)).round(prec, Round::Down);
    let hi = Dyadic::new(kl_hi + t_hi * 2, -(p as i64)).round(prec, Round::Up);
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use proptest::prelude::*;

    #[test]
    fn rationals_round_outward() {
        let e = RealEnclosure::from_rational(&rat(1, 3), 64);
        assert!(e.contains(&rat(1, 3)));
        assert!(e.width() < rational::pow2(-63));
        let exact = RealEnclosure::from_rational(&rat(1, 4), 64);
        assert_eq!(exact.width(), int(0));
    }

    #[test]
    fn logarithms_match_f64() {
        for (n, d) in [(1, 2), (3, 1), (1, 3), (1024, 1), (7, 18), (123456789, 1000)] {
            let r = rat(n, d);
            let e = RealEnclosure::ln_rational(&r, 128).unwrap();
            let f = (n as f64 / d as f64).ln();
            assert!((e.mid_f64() - f).abs() < 1e-14, "{n}/{d}");
            assert!(e.width() < rational::pow2(-100));
        }
        let zero = RealEnclosure::ln_rational(&int(1), 128).unwrap();
        assert!(zero.contains(&int(0)));
        assert!(RealEnclosure::ln_rational(&int(0), 64).is_err());
    }

    #[test]
    fn log_of_power_is_consistent() {
        // ln(2^10) encloses 10 * ln(2)
        let a = RealEnclosure::ln_rational(&int(1024), 200).unwrap();
        let b = RealEnclosure::ln_rational(&int(2), 200).unwrap().mul_int(&BigInt::from(10));
        assert!(a.cmp_definite(&b).is_none());
    }

    #[test]
    fn sqrt_and_roots() {
        let s = RealEnclosure::sqrt_rational(&int(2), 128).unwrap();
        assert!((s.mid_f64() - 2f64.sqrt()).abs() < 1e-15);
        assert!(s.mul(&s).contains(&int(2)));
        let exact = RealEnclosure::sqrt_rational(&rat(1, 100), 64).unwrap();
        assert!(exact.contains(&rat(1, 10)));
        let r = RealEnclosure::inv_root(&BigInt::from(2), 1, 64).unwrap();
        assert!(r.contains(&rat(1, 2)));
        let r = RealEnclosure::inv_root(&BigInt::from(8), 3, 64).unwrap();
        assert!(r.contains(&rat(1, 2)));
        let r = RealEnclosure::inv_root(&BigInt::from(5), 2, 64).unwrap();
        assert!((r.mid_f64() - 5f64.powf(-0.5)).abs() < 1e-15);
    }

    #[test]
    fn escalation_reports_last_precision() {
        assert_eq!(escalate(64, 1024, |p| (p >= 256).then_some(p)), Ok((256, 256)));
        assert_eq!(escalate::<()>(64, 512, |_| None), Err(512));
    }

    proptest! {
        #[test]
        fn arithmetic_contains_exact_results(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000) {
            let (x, y) = (rat(a, b), rat(c, d));
            let (ex, ey) = (RealEnclosure::from_rational(&x, 40), RealEnclosure::from_rational(&y, 40));
            prop_assert!(ex.add(&ey).contains(&(&x + &y)));
            prop_assert!(ex.sub(&ey).contains(&(&x - &y)));
            prop_assert!(ex.mul(&ey).contains(&(&x * &y)));
            if !y.is_zero() {
                prop_assert!(ex.div(&ey).unwrap().contains(&(&x / &y)));
            }
        }

        #[test]
        fn ln_brackets_f64(n in 1u64..1_000_000, d in 1u64..1_000_000) {
            let r = Rational::new(BigInt::from(n), BigInt::from(d));
            let e = RealEnclosure::ln_rational(&r, 96).unwrap();
            let f = (n as f64 / d as f64).ln();
            prop_assert!(e.lo().to_f64() <= f + 1e-12 && f - 1e-12 <= e.hi().to_f64());
        }
    }
}
