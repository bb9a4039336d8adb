//! Obstruction polynomials: integer polynomials with leading coefficient
//! `a_d > 1` and every root in the interval, each forcing
//! `t_M(I) >= a_d^(-1/d)`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Pow, Signed};
use rayon::prelude::*;

use crate::enclosure::{RealEnclosure, DEFAULT_PRECISION};
use crate::error::{Error, Result};
use crate::poly::{resultant, IntPolynomial};
use crate::realanalysis::{rational_roots, sturm_count, RatInterval};

/// The value `a^(-1/d)` kept symbolically. Ordered by the real number it
/// denotes, compared exactly by cross powering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionValue {
    pub a_d: BigInt,
    pub d: u32,
}

impl ObstructionValue {
    pub fn new(a_d: BigInt, d: u32) -> Result<Self> {
        if d == 0 || a_d <= BigInt::one() {
            return Err(Error::NotObstruction(format!("leading coefficient {a_d}, degree {d}")));
        }
        Ok(ObstructionValue { a_d, d })
    }

    pub fn enclosure(&self, prec: u32) -> RealEnclosure {
        RealEnclosure::inv_root(&self.a_d, self.d, prec).expect("a_d > 1")
    }

    /// Exact comparison of the denoted reals: `a^(-1/d)` vs `b^(-1/e)`.
    pub fn cmp_value(&self, other: &Self) -> Ordering {
        let lhs = Pow::pow(&self.a_d, other.d);
        let rhs = Pow::pow(&other.a_d, self.d);
        rhs.cmp(&lhs)
    }
}

/// A polynomial certified to be an obstruction for some interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obstruction {
    pub q: IntPolynomial,
    pub value: ObstructionValue,
}

impl Obstruction {
    pub fn a_d(&self) -> &BigInt {
        &self.value.a_d
    }

    pub fn d(&self) -> u32 {
        self.value.d
    }

    pub fn enclosure(&self, prec: u32) -> RealEnclosure {
        self.value.enclosure(prec)
    }
}

/// `(a_d, d, enclosure of a_d^(-1/d))` for a candidate with leading
/// coefficient at least 2.
pub fn obstruction_value(q: &IntPolynomial) -> Result<(BigInt, u32, RealEnclosure)> {
    let d = q.degree().ok_or(Error::ZeroPolynomial)?;
    let a = q.leading().unwrap().clone();
    if d == 0 || a <= BigInt::one() {
        return Err(Error::NotObstruction(format!("not an obstruction candidate: {q}")));
    }
    let d = u32::try_from(d).map_err(|_| Error::InvalidArgument("degree too large".into()))?;
    let enc = RealEnclosure::inv_root(&a, d, DEFAULT_PRECISION)?;
    Ok((a, d, enc))
}

/// Whether `q` is an obstruction for `iv`: degree at least one, leading
/// coefficient above one, primitive, no rational root when the degree is at
/// least two, and `deg q` distinct roots in `iv`.
///
/// Irreducibility is only approximated by the content and rational-root
/// checks.
pub fn is_obstruction_for(q: &IntPolynomial, iv: &RatInterval) -> bool {
    let Some(d) = q.degree() else { return false };
    if d == 0 || q.leading().unwrap() <= &BigInt::one() || !q.is_primitive() {
        return false;
    }
    if !roots_in(q, iv, d) {
        return false;
    }
    d == 1 || rational_roots(q).map(|r| r.is_empty()).unwrap_or(false)
}

fn roots_in(q: &IntPolynomial, iv: &RatInterval, d: usize) -> bool {
    // Cheap necessary condition: with all roots in [a, b], q(a) and q(b)
    // have signs (-1)^d and +1 relative to the leading coefficient, or vanish.
    let sa = q.sign_at(iv.a());
    let sb = q.sign_at(iv.b());
    let expect_a = if d.is_multiple_of(2) { Ordering::Greater } else { Ordering::Less };
    if (sa != Ordering::Equal && sa != expect_a) || (sb != Ordering::Equal && sb != Ordering::Greater) {
        return false;
    }
    sturm_count(q, iv).map(|n| n == d).unwrap_or(false)
}

/// Exhaustive search for the obstruction with the largest `a_d^(-1/d)` among
/// polynomials of degree at most `d_max` with coefficients bounded by
/// `h_max` and leading coefficient in `[2, h_max]`.
///
/// Candidates are visited by degree, then leading coefficient, then the
/// coefficient vector `(a_0, ..., a_{d-1})` in lexicographic order; the first
/// candidate with the best value wins.
pub fn max_obstruction_search(iv: &RatInterval, d_max: u32, h_max: u32) -> Result<Option<Obstruction>> {
    if d_max < 1 || h_max < 2 {
        return Err(Error::InvalidArgument(format!("need d_max >= 1 and H_max >= 2, got {d_max}, {h_max}")));
    }
    let h = h_max as i64;
    let side = 2 * h + 1;
    let mut best: Option<Obstruction> = None;
    for d in 1..=d_max {
        let count = (side as u128).checked_pow(d).filter(|c| *c <= u64::MAX as u128).ok_or_else(|| {
            Error::InvalidArgument(format!("search space for degree {d} is too large"))
        })? as u64;
        for a in 2..=h {
            let value = ObstructionValue::new(BigInt::from(a), d)?;
            if let Some(b) = &best {
                if value.cmp_value(&b.value) != Ordering::Greater {
                    // Larger a only lowers the value.
                    break;
                }
            }
            let hit = (0..count).into_par_iter().find_first(|&idx| {
                let q = candidate(idx, d as usize, a, h, side);
                is_obstruction_for(&q, iv)
            });
            if let Some(idx) = hit {
                let q = candidate(idx, d as usize, a, h, side);
                best = Some(Obstruction { q, value });
                break;
            }
        }
    }
    Ok(best)
}

/// The `idx`-th coefficient vector in lexicographic order with `a_0` most
/// significant, with leading coefficient `a`.
fn candidate(mut idx: u64, d: usize, a: i64, h: i64, side: i64) -> IntPolynomial {
    let mut coeffs = vec![0i64; d + 1];
    for k in (0..d).rev() {
        coeffs[k] = (idx % side as u64) as i64 - h;
        idx /= side as u64;
    }
    coeffs[d] = a;
    IntPolynomial::from_i64s(&coeffs)
}

/// The candidates with `|Res(f, q)| = 1`.
pub fn sieve_by_resultant(candidates: &[IntPolynomial], q: &IntPolynomial) -> Result<Vec<IntPolynomial>> {
    if q.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let keep: Vec<bool> = candidates
        .par_iter()
        .map(|f| !f.is_zero() && resultant(f, q).map(|r| r.abs().is_one()).unwrap_or(false))
        .collect();
    Ok(candidates.iter().zip(keep).filter(|(_, k)| *k).map(|(f, _)| f.clone()).collect())
}

/// `|Res(f_i, q)|` for each candidate.
pub fn resultants_with(candidates: &[IntPolynomial], q: &IntPolynomial) -> Result<Vec<BigInt>> {
    candidates.par_iter().map(|f| resultant(f, q).map(|r| r.abs())).collect()
}

/// Decimal rendering of `a^(-1/d)` with the given number of digits.
pub fn value_decimal(v: &ObstructionValue, digits: usize) -> String {
    let bits = ((digits as f64) * 3.33) as u32 + 64;
    v.enclosure(bits.max(DEFAULT_PRECISION)).to_decimal_pair(digits).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    fn iv(a: crate::Rational, b: crate::Rational) -> RatInterval {
        RatInterval::new(a, b).unwrap()
    }

    #[test]
    fn value_examples() {
        let (a, d, e) = obstruction_value(&p(&[-1, 2])).unwrap();
        assert_eq!((a, d), (BigInt::from(2), 1));
        assert!(e.contains(&rat(1, 2)));
        let (a, d, e) = obstruction_value(&p(&[-1, 5])).unwrap();
        assert_eq!((a, d), (BigInt::from(5), 1));
        assert!(e.contains(&rat(1, 5)));
        assert!(matches!(obstruction_value(&p(&[1, -3, 1])), Err(Error::NotObstruction(_))));
        assert!(obstruction_value(&p(&[3])).is_err());
    }

    #[test]
    fn obstruction_checks() {
        assert!(is_obstruction_for(&p(&[-1, 2]), &iv(int(0), int(1))));
        assert!(!is_obstruction_for(&p(&[-1, 3]), &iv(int(0), rat(3, 10))));
        assert!(!is_obstruction_for(&p(&[2, -6, 2]), &iv(int(0), int(1))));
        // Rational roots disqualify higher-degree candidates.
        assert!(!is_obstruction_for(&p(&[0, -1, 2]), &iv(int(0), int(1))));
        // 5x^2 - 5x + 1 has roots (5 +- sqrt 5)/10 in [0, 1].
        assert!(is_obstruction_for(&p(&[1, -5, 5]), &iv(int(0), int(1))));
        assert!(!is_obstruction_for(&p(&[1, -5, 5]), &iv(int(0), rat(1, 2))));
    }

    #[test]
    fn cross_power_order() {
        let v = |a: i64, d| ObstructionValue::new(BigInt::from(a), d).unwrap();
        assert_eq!(v(2, 1).cmp_value(&v(4, 2)), Ordering::Equal);
        assert_eq!(v(2, 1).cmp_value(&v(3, 1)), Ordering::Greater);
        assert_eq!(v(5, 2).cmp_value(&v(2, 1)), Ordering::Less);
        assert_eq!(v(3, 2).cmp_value(&v(2, 1)), Ordering::Greater);
    }

    /// Linear obstructions `a x - p` with a root in the interval, scanned
    /// directly.
    fn linear_oracle(i: &RatInterval, h: i64) -> (i64, i64) {
        let mut best: Option<(i64, i64)> = None;
        for a in 2..=h {
            for c in -h..=h {
                let root = rat(-c, a);
                if num_integer::gcd(a, c) == 1 && i.contains(&root) {
                    if best.map_or(true, |(ba, _)| a < ba) {
                        best = Some((a, c));
                    }
                }
            }
        }
        best.unwrap()
    }

    #[test]
    fn search_examples() {
        let best = max_obstruction_search(&iv(int(0), int(1)), 1, 10).unwrap().unwrap();
        assert_eq!(best.q, p(&[-1, 2]));
        let best = max_obstruction_search(&iv(int(0), rat(1, 5)), 1, 10).unwrap().unwrap();
        assert_eq!(best.q, p(&[-1, 5]));
        let i = iv(rat(2, 5), rat(3, 5));
        let best = max_obstruction_search(&i, 1, 10).unwrap().unwrap();
        let (a, c) = linear_oracle(&i, 10);
        assert_eq!(best.q, p(&[c, a]));
        assert_eq!(best.q, p(&[-1, 2]));
        assert!(max_obstruction_search(&iv(rat(1, 3), rat(1, 3)), 1, 2).unwrap().is_none());
        assert!(max_obstruction_search(&i, 0, 10).is_err());
    }

    #[test]
    fn search_small_intervals() {
        for n in 2..=10i64 {
            let best = max_obstruction_search(&iv(int(0), rat(1, n)), 2, 2 * n as u32).unwrap().unwrap();
            assert_eq!(best.q, p(&[-1, n]), "n = {n}");
        }
    }

    #[test]
    fn sieve_examples() {
        let q = p(&[-1, 3]);
        assert_eq!(sieve_by_resultant(&[p(&[0, 1])], &q).unwrap(), vec![p(&[0, 1])]);
        assert!(sieve_by_resultant(&[p(&[-1, 1])], &q).unwrap().is_empty());
        assert!(sieve_by_resultant(&[], &q).unwrap().is_empty());
        assert_eq!(resultants_with(&[p(&[-1, 1])], &q).unwrap(), vec![BigInt::from(2)]);
    }

    #[test]
    fn decimal_value() {
        let v = ObstructionValue::new(BigInt::from(3), 1).unwrap();
        assert!(value_decimal(&v, 20).starts_with("0.33333333333333333333"));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn search_monotone_in_budget(a in -10i64..10, w in 1i64..10, h in 2u32..6) {
            let i = iv(rat(a, 10), rat(a + w, 10));
            let small = max_obstruction_search(&i, 1, h).unwrap();
            let large = max_obstruction_search(&i, 2, h + 2).unwrap();
            match (small, large) {
                (Some(s), Some(l)) => prop_assert!(l.value.cmp_value(&s.value) != Ordering::Less),
                (Some(_), None) => prop_assert!(false, "larger budget lost a candidate"),
                _ => {}
            }
        }

        #[test]
        fn sequential_scan_agrees(a in -6i64..6, w in 1i64..8) {
            let i = iv(rat(a, 6), rat(a + w, 6));
            let found = max_obstruction_search(&i, 1, 6).unwrap().unwrap();
            let (la, lc) = linear_oracle(&i, 6);
            prop_assert_eq!(found.q, p(&[lc, la]));
        }
    }
}
