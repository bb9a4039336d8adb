//! Rational-number helpers: parsing decimal literals exactly, simplest
//! rationals in an interval (Stern-Brocot descent), bounded-denominator
//! convergents and decimal rendering.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn pow2(e: i64) -> Rational {
    if e >= 0 {
        Rational::from_integer(BigInt::one() << (e as usize))
    } else {
        Rational::new(BigInt::one(), BigInt::one() << ((-e) as usize))
    }
}

/// Parses `"3"`, `"-7/18"`, `"0.303"` or `"1e-9"` into an exact rational.
/// Decimal literals are never routed through binary floating point.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty rational literal".into()));
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
        let d: BigInt = d.trim().parse().map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exp10) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i64 = s[pos + 1..].parse().map_err(|_| Error::Parse(format!("bad exponent in {s:?}")))?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(Error::Parse(format!("no digits in {s:?}")));
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(Error::Parse(format!("not a number: {s:?}")));
    }
    let digits = format!("{int_part}{frac_part}");
    let mut num: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().unwrap() };
    if neg {
        num = -num;
    }
    let scale = exp10 - frac_part.len() as i64;
    let ten = BigInt::from(10);
    Ok(if scale >= 0 {
        Rational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(num, num_traits::pow(ten, (-scale) as usize))
    })
}

/// The rational with the smallest denominator (and then smallest absolute
/// numerator) in the closed interval `[lo, hi]`.
pub fn simplest_in(lo: &Rational, hi: &Rational) -> Rational {
    assert!(lo <= hi, "simplest_in: empty interval");
    if !lo.is_positive() && !hi.is_negative() {
        return Rational::zero();
    }
    if hi.is_negative() {
        return -simplest_in(&-hi.clone(), &-lo.clone());
    }
    // 0 < lo <= hi: walk down the Stern-Brocot tree via continued fractions.
    let mut quotients: Vec<BigInt> = Vec::new();
    let (mut l, mut h) = (lo.clone(), hi.clone());
    let tail = loop {
        let fl = l.floor();
        if fl == l {
            break fl.to_integer();
        }
        let next = &fl + Rational::one();
        if next <= h {
            break next.to_integer();
        }
        quotients.push(fl.to_integer());
        let nl = (&h - &fl).recip();
        let nh = (&l - &fl).recip();
        l = nl;
        h = nh;
    };
    let mut acc = Rational::from_integer(tail);
    for a in quotients.into_iter().rev() {
        acc = Rational::from_integer(a) + acc.recip();
    }
    acc
}

/// Last continued-fraction convergent of `x` whose denominator does not
/// exceed `max_den`.
pub fn convergent_with_limit(x: &Rational, max_den: &BigInt) -> Rational {
    let (mut p0, mut q0) = (BigInt::zero(), BigInt::one());
    let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
    let mut rest = x.clone();
    let mut best = Rational::from_integer(x.floor().to_integer());
    loop {
        let a = rest.floor().to_integer();
        let p2 = &a * &p1 + &p0;
        let q2 = &a * &q1 + &q0;
        if &q2 > max_den {
            break;
        }
        best = Rational::new(p2.clone(), q2.clone());
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        let frac = &rest - Rational::from_integer(a);
        if frac.is_zero() {
            break;
        }
        rest = frac.recip();
    }
    best
}

/// Exact conversion of a finite `f64` into a rational.
pub fn from_f64(x: f64) -> Rational {
    Rational::from_float(x).expect("finite float")
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // Huge numerators/denominators: scale through bit lengths.
        let nb = x.numer().bits() as i64;
        let db = x.denom().bits() as i64;
        let shift = nb - db;
        let scaled = x / pow2(shift);
        scaled.to_f64().unwrap_or(f64::NAN) * 2f64.powi(shift as i32)
    })
}

/// Decimal rendering with `digits` fractional digits, truncated toward zero.
pub fn to_decimal(x: &Rational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = (x.numer().abs() * &scale).div_floor(x.denom());
    let (ip, fp) = scaled.div_rem(&scale);
    let sign = if x.numer().sign() == Sign::Minus { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{ip}")
    } else {
        format!("{sign}{ip}.{:0>width$}", fp.to_string(), width = digits)
    }
}

pub fn lcm_all<'a>(it: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    it.into_iter().fold(BigInt::one(), |acc, d| acc.lcm(d))
}

pub fn gcd_all<'a>(it: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    it.into_iter().fold(BigInt::zero(), |acc, d| acc.gcd(d))
}

/// Serde adapter writing a rational as its `"p/q"` string.
pub mod as_string {
    use super::{parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}
