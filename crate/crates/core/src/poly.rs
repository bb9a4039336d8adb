//! Dense integer polynomials and the exact operations built on them.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Polynomial with arbitrary-precision integer coefficients, stored in
/// ascending degree order. The zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::monomial(1)
    }

    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = BigInt::one();
        IntPolynomial { coeffs }
    }

    /// `a*x - b`.
    pub fn linear(a: i64, b: i64) -> Self {
        Self::from_i64s(&[-b, a])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree, treating the zero polynomial as degree 0 where a number is
    /// needed for sizing.
    pub(crate) fn deg0(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    /// Non-negative gcd of the coefficients; zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divides by the content and normalizes the leading coefficient to be
    /// positive.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut g = self.content();
        if self.leading().unwrap().is_negative() {
            g = -g;
        }
        Self::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Multiplies by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        IntPolynomial { coeffs }
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigInt::from(k))
                .collect(),
        )
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Exact value at a rational point by Horner's rule.
    pub fn eval_rational(&self, x: &Rational) -> Rational {
        let (num, den) = (x.numer(), x.denom());
        let n = self.deg0();
        let value = self.eval_homogeneous(num, den);
        Rational::new(value, num_traits::pow(den.clone(), n))
    }

    /// `sum c_k u^k v^(n-k)` with `n = deg p`, i.e. `v^n p(u/v)`.
    pub fn eval_homogeneous(&self, u: &BigInt, v: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        let mut vpow = BigInt::one();
        for c in self.coeffs.iter().rev() {
            acc = acc * u + c * &vpow;
            vpow *= v;
        }
        acc
    }

    /// Sign of `p(x)`.
    pub fn sign_at(&self, x: &Rational) -> Ordering {
        self.eval_homogeneous(x.numer(), x.denom()).cmp(&BigInt::zero())
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        use num_traits::ToPrimitive;
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    /// Upper bound for `sup |p(x)|` over `|x| <= radius`.
    pub fn abs_bound(&self, radius: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * radius + Rational::from_integer(c.abs());
        }
        acc
    }

    /// Pseudo-remainder: `lc(d)^(deg self - deg d + 1) * self = q*d + r`.
    pub fn pseudo_rem(&self, d: &Self) -> Self {
        assert!(!d.is_zero(), "pseudo_rem by zero polynomial");
        let dd = d.deg0();
        let lc = d.leading().unwrap();
        let mut r = self.clone();
        let mut steps = match self.degree() {
            Some(n) if n >= dd => n - dd + 1,
            _ => return r,
        };
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let lr = r.leading().unwrap().clone();
            let shift = rd - dd;
            let mut coeffs: Vec<BigInt> = r.coeffs.iter().map(|c| c * lc).collect();
            for (k, c) in d.coeffs.iter().enumerate() {
                coeffs[k + shift] -= &lr * c;
            }
            r = Self::new(coeffs);
            steps -= 1;
        }
        if steps > 0 {
            r = r.scale(&num_traits::pow(lc.clone(), steps));
        }
        r
    }

    /// Quotient and remainder over the rationals, returned only when the
    /// division is exact over the integers.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let dd = d.deg0();
        let n = self.deg0();
        if n < dd {
            return None;
        }
        let lc = d.leading().unwrap();
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); n - dd + 1];
        for k in (0..=n - dd).rev() {
            let top = &r[k + dd];
            if top.is_zero() {
                continue;
            }
            let (qk, rem) = top.div_rem(lc);
            if !rem.is_zero() {
                return None;
            }
            for (j, c) in d.coeffs.iter().enumerate() {
                r[k + j] -= &qk * c;
            }
            q[k] = qk;
        }
        if r.iter().all(Zero::is_zero) {
            Some(Self::new(q))
        } else {
            None
        }
    }

    /// Greatest common divisor over `Z[x]` (primitive, positive leading
    /// coefficient), via the primitive PRS.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.primitive_part();
        }
        if other.is_zero() {
            return self.primitive_part();
        }
        let c = self.content().gcd(&other.content());
        let (mut a, mut b) = (self.primitive_part(), other.primitive_part());
        if a.deg0() < b.deg0() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive_part();
        }
        a.primitive_part().scale(&c).primitive_part()
    }

    /// `p / gcd(p, p')`, primitive.
    pub fn squarefree_part(&self) -> Self {
        if self.is_constant() {
            return self.primitive_part();
        }
        let g = self.gcd(&self.derivative());
        if g.is_constant() {
            return self.primitive_part();
        }
        self.primitive_part()
            .div_exact(&g)
            .expect("gcd divides its argument")
            .primitive_part()
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPolynomial({self})")
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = !a.is_one() || k == 0;
            if show_coeff {
                write!(f, "{a}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let strs: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        strs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Coeff {
            Str(String),
            Int(i64),
        }
        let raw = Vec::<Coeff>::deserialize(d)?;
        let coeffs = raw
            .into_iter()
            .map(|c| match c {
                Coeff::Str(s) => s.trim().parse::<BigInt>().map_err(serde::de::Error::custom),
                Coeff::Int(i) => Ok(BigInt::from(i)),
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(IntPolynomial::new(coeffs))
    }
}

impl std::str::FromStr for IntPolynomial {
    type Err = Error;

    /// Accepts the JSON coefficient-array format, e.g. `["2","-31","1"]`.
    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("polynomial {s:?}: {e}")))
    }
}

impl<'a> Add<&'a IntPolynomial> for &'a IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<'a> Sub<&'a IntPolynomial> for &'a IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<'a> Mul<&'a IntPolynomial> for &'a IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<IntPolynomial> for IntPolynomial {
            type Output = IntPolynomial;
            fn $m(self, rhs: IntPolynomial) -> IntPolynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Product of a list of polynomials.
pub fn product<'a>(ps: impl IntoIterator<Item = &'a IntPolynomial>) -> IntPolynomial {
    ps.into_iter().fold(IntPolynomial::one(), |acc, p| &acc * p)
}

/// Degree threshold above which [`resultant`] switches from the Sylvester
/// determinant to the subresultant PRS.
pub const SYLVESTER_MAX_DEGREE: usize = 8;

/// Exact resultant `Res(f, g)`.
pub fn resultant(f: &IntPolynomial, g: &IntPolynomial) -> Result<BigInt> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.deg0().max(g.deg0()) > SYLVESTER_MAX_DEGREE {
        Ok(resultant_subresultant(f, g))
    } else {
        Ok(resultant_sylvester(f, g))
    }
}

/// Determinant of the Sylvester matrix.
pub fn resultant_sylvester(f: &IntPolynomial, g: &IntPolynomial) -> BigInt {
    let (m, n) = (f.deg0(), g.deg0());
    if m == 0 && n == 0 {
        return BigInt::one();
    }
    let size = m + n;
    let mut mat = vec![vec![BigInt::zero(); size]; size];
    for i in 0..n {
        for (k, c) in f.coeffs().iter().rev().enumerate() {
            mat[i][i + k] = c.clone();
        }
    }
    for i in 0..m {
        for (k, c) in g.coeffs().iter().rev().enumerate() {
            mat[n + i][i + k] = c.clone();
        }
    }
    determinant_bareiss(mat)
}

/// Fraction-free Gaussian elimination.
pub fn determinant_bareiss(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Resultant via the subresultant pseudo-remainder sequence.
pub fn resultant_subresultant(f: &IntPolynomial, g: &IntPolynomial) -> BigInt {
    let (mut a, mut b) = (f.clone(), g.clone());
    let mut s = BigInt::one();
    if a.deg0() < b.deg0() {
        if a.deg0() % 2 == 1 && b.deg0() % 2 == 1 {
            s = -s;
        }
        std::mem::swap(&mut a, &mut b);
    }
    if b.deg0() == 0 {
        return s * num_traits::pow(b.coeff(0), a.deg0());
    }
    let ca = a.content();
    let cb = b.content();
    let t = num_traits::pow(ca.clone(), b.deg0()) * num_traits::pow(cb.clone(), a.deg0());
    a = IntPolynomial::new(a.coeffs().iter().map(|c| c / &ca).collect());
    b = IntPolynomial::new(b.coeffs().iter().map(|c| c / &cb).collect());
    let mut gg = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let (da, db) = (a.deg0(), b.deg0());
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            s = -s;
        }
        let r = a.pseudo_rem(&b);
        a = b;
        if r.is_zero() {
            return BigInt::zero();
        }
        let div = &gg * num_traits::pow(h.clone(), delta);
        b = IntPolynomial::new(r.coeffs().iter().map(|c| c / &div).collect());
        gg = a.leading().unwrap().clone();
        // h <- h^(1-delta) g^delta
        h = if delta == 0 {
            h
        } else {
            num_traits::pow(gg.clone(), delta) / num_traits::pow(h.clone(), delta - 1)
        };
        if b.deg0() == 0 {
            let da = a.deg0();
            let lb = b.coeff(0);
            let hh = if da == 0 {
                h.clone()
            } else {
                num_traits::pow(lb, da) / num_traits::pow(h.clone(), da - 1)
            };
            return s * t * hh;
        }
    }
}

/// Chebyshev polynomial of the first kind, `T_{k+1} = 2x T_k - T_{k-1}`.
pub fn chebyshev_t(n: usize) -> IntPolynomial {
    let mut prev = IntPolynomial::one();
    if n == 0 {
        return prev;
    }
    let mut cur = IntPolynomial::x();
    let two_x = IntPolynomial::from_i64s(&[0, 2]);
    for _ in 1..n {
        let next = &(&two_x * &cur) - &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// `integral_a^b x^k dx = (b^{k+1} - a^{k+1}) / (k+1)`.
pub fn moment(a: &Rational, b: &Rational, k: usize) -> Result<Rational> {
    if a > b {
        return Err(Error::InvalidInterval(format!("moment: {a} > {b}")));
    }
    let e = (k + 1) as i32;
    Ok((num_traits::pow(b.clone(), e as usize) - num_traits::pow(a.clone(), e as usize))
        / Rational::from_integer(BigInt::from(e)))
}
