//! LLL reduction of polynomial lattices under the monic-biased inner product
//! `<p, q> = int_I p q + p_k q_k`, and the recursive search for factors of
//! attaining polynomials.

use std::collections::BTreeSet;

use log::debug;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::obstruction::resultants_with;
use crate::poly::{determinant_bareiss, moment, IntPolynomial};
use crate::rational::{self, rat, Rational};
use crate::realanalysis::{split_rational_roots, RatInterval};

pub type Matrix = Vec<Vec<Rational>>;

/// Gram matrix of `1, x, ..., x^k` under `int_I p q + p_k q_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonicGram {
    pub interval: RatInterval,
    pub k: usize,
    pub g: Matrix,
    moments: Vec<Rational>,
}

impl MonicGram {
    pub fn dim(&self) -> usize {
        self.k + 1
    }

    /// `<u, v>` for polynomials of degree at most `k`.
    pub fn inner(&self, u: &IntPolynomial, v: &IntPolynomial) -> Rational {
        let uv = u * v;
        let mut s: Rational = uv
            .coeffs()
            .iter()
            .zip(&self.moments)
            .map(|(c, m)| m * Rational::from_integer(c.clone()))
            .sum();
        s += Rational::from_integer(u.coeff(self.k) * v.coeff(self.k));
        s
    }

    /// Gram matrix of an arbitrary list of vectors in this space.
    pub fn gram_of(&self, vectors: &[IntPolynomial]) -> Matrix {
        let n = vectors.len();
        let mut g = vec![vec![Rational::zero(); n]; n];
        for i in 0..n {
            for j in i..n {
                let v = self.inner(&vectors[i], &vectors[j]);
                g[j][i] = v.clone();
                g[i][j] = v;
            }
        }
        g
    }
}

/// Exact Gram matrix of the power basis of degree `k` on `iv`.
pub fn monic_gram(iv: &RatInterval, k: usize) -> Result<MonicGram> {
    if iv.is_degenerate() {
        return Err(Error::InvalidInterval(format!("{iv} is a single point")));
    }
    let moments = (0..=2 * k).map(|j| moment(iv.a(), iv.b(), j)).collect::<Result<Vec<_>>>()?;
    let mut g = vec![vec![Rational::zero(); k + 1]; k + 1];
    for i in 0..=k {
        for j in 0..=k {
            g[i][j] = moments[i + j].clone();
        }
    }
    g[k][k] += Rational::one();
    Ok(MonicGram { interval: iv.clone(), k, g, moments })
}

/// Lattice basis of polynomials of degree at most `ambient`, with the integer
/// transform taking the starting basis to the current one (row convention:
/// `vectors[i] = sum_j transform[i][j] start[j]`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyBasis {
    pub vectors: Vec<IntPolynomial>,
    pub transform: Vec<Vec<BigInt>>,
    pub ambient: usize,
}

impl PolyBasis {
    pub fn new(vectors: Vec<IntPolynomial>, ambient: usize) -> Result<Self> {
        if vectors.iter().any(|v| v.degree().is_some_and(|d| d > ambient)) {
            return Err(Error::InvalidArgument(format!("basis vector exceeds degree {ambient}")));
        }
        let n = vectors.len();
        let transform = (0..n)
            .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
        Ok(PolyBasis { vectors, transform, ambient })
    }

    /// `1, x, ..., x^k`.
    pub fn power(k: usize) -> Self {
        Self::new((0..=k).map(IntPolynomial::monomial).collect(), k).expect("degrees fit")
    }

    /// `1, f, f x, ..., f x^k` in degree `deg f + k`.
    pub fn shifted(f: &IntPolynomial, k: usize) -> Self {
        let mut v = vec![IntPolynomial::one()];
        v.extend((0..=k).map(|j| f.shift(j)));
        Self::new(v, f.deg0() + k).expect("degrees fit")
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

/// Output of [`lll_gram`]: the unimodular transform and the reduced Gram
/// matrix `T G T^t`.
#[derive(Clone, Debug)]
pub struct LllOutput {
    pub transform: Vec<Vec<BigInt>>,
    pub gram: Matrix,
    pub swaps: usize,
}

/// LLL reduction of the lattice with Gram matrix `g`, in exact rational
/// arithmetic.
pub fn lll_gram(g: &Matrix, delta: &Rational) -> Result<LllOutput> {
    if delta <= &rat(1, 4) || delta >= &rat(1, 1) {
        return Err(Error::InvalidArgument(format!("LLL needs 1/4 < delta < 1, got {delta}")));
    }
    let n = g.len();
    let mut g = g.clone();
    let mut t: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    if n == 0 {
        return Ok(LllOutput { transform: t, gram: g, swaps: 0 });
    }
    let mut mu = vec![vec![Rational::zero(); n]; n];
    let mut bb = vec![Rational::zero(); n];
    bb[0] = g[0][0].clone();
    if !bb[0].is_positive() {
        return Err(Error::NotPositiveDefinite);
    }
    let half = rat(1, 2);
    let mut k = 1;
    let mut kmax = 0;
    let mut swaps = 0;

    let red = |k: usize, l: usize, g: &mut Matrix, t: &mut Vec<Vec<BigInt>>, mu: &mut Matrix| {
        if mu[k][l].abs() <= half {
            return;
        }
        let q = mu[k][l].round();
        let qi = q.to_integer();
        let gkl = g[k][l].clone();
        for i in 0..n {
            if i != k {
                let v = &g[k][i] - &q * &g[l][i];
                g[i][k] = v.clone();
                g[k][i] = v;
            }
        }
        g[k][k] = &g[k][k] - &q * &gkl * rational::int(2) + &q * &q * &g[l][l];
        // Rows k and l already reflect the update except for the (k, l) pair,
        // which the loop above covered since l != k.
        let tl = t[l].clone();
        for (x, y) in t[k].iter_mut().zip(&tl) {
            *x -= &qi * y;
        }
        mu[k][l] -= &q;
        for i in 0..l {
            let v = &q * &mu[l][i];
            mu[k][i] -= v;
        }
    };

    while k < n {
        if k > kmax {
            kmax = k;
            for j in 0..=k {
                let mut s = g[k][j].clone();
                for i in 0..j {
                    s -= &mu[j][i] * &mu[k][i] * &bb[i];
                }
                if j < k {
                    mu[k][j] = s / &bb[j];
                } else {
                    bb[k] = s;
                }
            }
            if !bb[k].is_positive() {
                return Err(Error::NotPositiveDefinite);
            }
        }
        red(k, k - 1, &mut g, &mut t, &mut mu);
        let m2 = &mu[k][k - 1] * &mu[k][k - 1];
        if bb[k] < (delta - &m2) * &bb[k - 1] {
            swaps += 1;
            g.swap(k, k - 1);
            for row in g.iter_mut() {
                row.swap(k, k - 1);
            }
            t.swap(k, k - 1);
            for j in 0..k - 1 {
                let tmp = mu[k][j].clone();
                mu[k][j] = mu[k - 1][j].clone();
                mu[k - 1][j] = tmp;
            }
            let m = mu[k][k - 1].clone();
            let b = &bb[k] + &m * &m * &bb[k - 1];
            mu[k][k - 1] = &m * &bb[k - 1] / &b;
            bb[k] = &bb[k - 1] * &bb[k] / &b;
            bb[k - 1] = b;
            for i in (k + 1)..=kmax {
                let tv = mu[i][k].clone();
                mu[i][k] = &mu[i][k - 1] - &m * &tv;
                mu[i][k - 1] = tv + &mu[k][k - 1] * &mu[i][k];
            }
            k = (k - 1).max(1);
        } else {
            for l in (0..k.saturating_sub(1)).rev() {
                red(k, l, &mut g, &mut t, &mut mu);
            }
            k += 1;
        }
    }
    Ok(LllOutput { transform: t, gram: g, swaps })
}

/// LLL-reduce a polynomial basis under the inner product of `gram`, whose
/// degree must match the basis' ambient degree.
pub fn lll_reduce(basis: &PolyBasis, gram: &MonicGram, delta: &Rational) -> Result<PolyBasis> {
    if gram.k != basis.ambient {
        return Err(Error::InvalidArgument(format!(
            "Gram matrix has degree {} but basis lives in degree {}",
            gram.k, basis.ambient
        )));
    }
    let g = gram.gram_of(&basis.vectors);
    let out = lll_gram(&g, delta)?;
    let vectors = out
        .transform
        .iter()
        .map(|row| {
            row.iter()
                .zip(&basis.vectors)
                .fold(IntPolynomial::zero(), |acc, (c, v)| &acc + &v.scale(c))
        })
        .collect();
    let transform = mat_mul_int(&out.transform, &basis.transform);
    Ok(PolyBasis { vectors, transform, ambient: basis.ambient })
}

fn mat_mul_int(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let m = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..m)
                .map(|j| row.iter().zip(b).map(|(x, r)| x * &r[j]).sum())
                .collect()
        })
        .collect()
}

/// Gram–Schmidt data `(mu, B)` of a positive definite Gram matrix.
pub fn gram_schmidt(g: &Matrix) -> Result<(Matrix, Vec<Rational>)> {
    let n = g.len();
    let mut mu = vec![vec![Rational::zero(); n]; n];
    let mut bb = vec![Rational::zero(); n];
    for k in 0..n {
        for j in 0..=k {
            let mut s = g[k][j].clone();
            for i in 0..j {
                s -= &mu[j][i] * &mu[k][i] * &bb[i];
            }
            if j < k {
                mu[k][j] = s / &bb[j];
            } else {
                bb[k] = s;
            }
        }
        if !bb[k].is_positive() {
            return Err(Error::NotPositiveDefinite);
        }
        mu[k][k] = Rational::one();
    }
    Ok((mu, bb))
}

/// Independent check of an LLL result: `T G T^t` equals the reported Gram
/// matrix, `|det T| = 1`, size reduction and the Lovász condition.
pub fn check_lll(original: &Matrix, out: &LllOutput, delta: &Rational) -> std::result::Result<(), String> {
    let n = original.len();
    let t: Matrix = out
        .transform
        .iter()
        .map(|r| r.iter().map(|x| Rational::from_integer(x.clone())).collect())
        .collect();
    for i in 0..n {
        for j in 0..n {
            let mut s = Rational::zero();
            for a in 0..n {
                if t[i][a].is_zero() {
                    continue;
                }
                for b in 0..n {
                    s += &t[i][a] * &original[a][b] * &t[j][b];
                }
            }
            if s != out.gram[i][j] {
                return Err(format!("T G T^t differs from reported Gram at ({i}, {j})"));
            }
        }
    }
    let det = determinant_bareiss(out.transform.clone());
    if !det.abs().is_one() {
        return Err(format!("transform determinant {det}"));
    }
    let (mu, bb) = gram_schmidt(&out.gram).map_err(|e| e.to_string())?;
    let half = rat(1, 2);
    for i in 1..n {
        for j in 0..i {
            if mu[i][j].abs() > half {
                return Err(format!("|mu[{i}][{j}]| = {} > 1/2", mu[i][j].abs()));
            }
        }
        if bb[i] < (delta - &mu[i][i - 1] * &mu[i][i - 1]) * &bb[i - 1] {
            return Err(format!("Lovasz condition fails at {i}"));
        }
    }
    Ok(())
}

/// Result of [`factor_search`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorSearch {
    pub factors: Vec<IntPolynomial>,
    /// `|Res(f, q)|` for each factor, all equal to one.
    #[serde(serialize_with = "ser_ints")]
    pub resultants: Vec<BigInt>,
    pub rounds: usize,
    pub truncated: bool,
}

fn ser_ints<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&x.to_string())?;
    }
    seq.end()
}

fn canonical_order(a: &IntPolynomial, b: &IntPolynomial) -> std::cmp::Ordering {
    a.deg0().cmp(&b.deg0()).then_with(|| a.coeffs().cmp(b.coeffs()))
}

#[derive(Clone, PartialEq, Eq)]
struct Ordered(IntPolynomial);

impl Ord for Ordered {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        canonical_order(&self.0, &other.0)
    }
}

impl PartialOrd for Ordered {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Monic nonconstant pieces of the reduced vectors, after dividing out
/// rational roots and already known factors.
fn harvest(basis: &PolyBasis, known: &BTreeSet<Ordered>) -> Result<Vec<IntPolynomial>> {
    let mut out = Vec::new();
    for v in &basis.vectors {
        if v.is_constant() {
            continue;
        }
        let mut v = v.primitive_part();
        for f in known {
            while let Some(q) = v.div_exact(&f.0) {
                v = q;
            }
        }
        if v.is_constant() {
            continue;
        }
        for piece in split_rational_roots(&v)? {
            if piece.is_monic() && !piece.is_constant() {
                out.push(piece);
            } else {
                debug!("discarding non-monic lattice vector {piece}");
            }
        }
    }
    Ok(out)
}

fn run_round(
    iv: &RatInterval,
    q: &IntPolynomial,
    basis: PolyBasis,
    delta: &Rational,
    known: &BTreeSet<Ordered>,
) -> Result<Vec<IntPolynomial>> {
    let gram = monic_gram(iv, basis.ambient)?;
    let reduced = lll_reduce(&basis, &gram, delta)?;
    let cands = harvest(&reduced, known)?;
    let res = resultants_with(&cands, q)?;
    Ok(cands.into_iter().zip(res).filter(|(_, r)| r.is_one()).map(|(f, _)| f).collect())
}

/// Recursive factor discovery: reduce `1, x, ..., x^k_init`, keep monic
/// pieces with `|Res(f, q)| = 1`, then for each new factor `f` reduce
/// `1, f, f x, ..., f x^k_init`, until no new factors appear or
/// `rounds_max` rounds have run.
pub fn factor_search(
    iv: &RatInterval,
    q: &IntPolynomial,
    k_init: usize,
    rounds_max: usize,
    delta: &Rational,
) -> Result<FactorSearch> {
    if k_init < 2 {
        return Err(Error::InvalidArgument(format!("k_init must be >= 2, got {k_init}")));
    }
    if q.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut known: BTreeSet<Ordered> = BTreeSet::new();
    let mut frontier: Vec<IntPolynomial> = Vec::new();
    let mut rounds = 0;
    while rounds < rounds_max {
        let bases: Vec<PolyBasis> = if rounds == 0 {
            vec![PolyBasis::power(k_init)]
        } else {
            frontier.iter().map(|f| PolyBasis::shifted(f, k_init)).collect()
        };
        rounds += 1;
        let found: Vec<Vec<IntPolynomial>> =
            bases.into_par_iter().map(|b| run_round(iv, q, b, delta, &known)).collect::<Result<_>>()?;
        let mut next = BTreeSet::new();
        for f in found.into_iter().flatten() {
            let o = Ordered(f);
            if !known.contains(&o) {
                next.insert(o);
            }
        }
        debug!("round {rounds}: {} new factors", next.len());
        frontier = next.iter().map(|o| o.0.clone()).collect();
        known.extend(next);
        if frontier.is_empty() {
            break;
        }
    }
    let truncated = rounds_max == 0 || !frontier.is_empty();
    let factors: Vec<IntPolynomial> = known.into_iter().map(|o| o.0).collect();
    let resultants = resultants_with(&factors, q)?;
    Ok(FactorSearch { factors, resultants, rounds, truncated })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use num_traits::Pow;
    use proptest::prelude::*;

    fn iv(a: Rational, b: Rational) -> RatInterval {
        RatInterval::new(a, b).unwrap()
    }

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn gram_examples() {
        let g = monic_gram(&iv(int(0), int(1)), 1).unwrap();
        assert_eq!(g.g, vec![vec![int(1), rat(1, 2)], vec![rat(1, 2), rat(4, 3)]]);
        let g = monic_gram(&iv(int(0), int(1)), 0).unwrap();
        assert_eq!(g.g, vec![vec![int(2)]]);
        assert!(monic_gram(&iv(int(1), int(1)), 3).is_err());
        let g = monic_gram(&iv(rat(-1, 3), rat(5, 7)), 8).unwrap();
        for i in 0..9 {
            for j in 0..9 {
                assert_eq!(g.g[i][j], g.g[j][i]);
            }
        }
        // The basis Gram matrix of the power basis is the matrix itself.
        assert_eq!(g.gram_of(&PolyBasis::power(8).vectors), g.g);
    }

    #[test]
    fn lll_examples() {
        let d = rat(3, 4);
        let g = m(&[&[4, 2], &[2, 3]]);
        // At delta = 3/4 the Lovasz condition holds with equality
        // (B_1 = 2 = (3/4 - 1/4) * 4), so the basis is already reduced.
        let out = lll_gram(&g, &d).unwrap();
        assert_eq!((out.gram[0][0].clone(), out.swaps), (int(4), 0));
        check_lll(&g, &out, &d).unwrap();
        let strict = rat(99, 100);
        let out = lll_gram(&g, &strict).unwrap();
        assert_eq!(out.gram[0][0], int(3));
        assert!(out.swaps >= 1);
        check_lll(&g, &out, &strict).unwrap();

        let diag = m(&[&[1, 0, 0], &[0, 2, 0], &[0, 0, 3]]);
        let out = lll_gram(&diag, &d).unwrap();
        assert_eq!(out.gram, diag);
        for (i, row) in out.transform.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                assert_eq!(x.abs(), if i == j { BigInt::one() } else { BigInt::zero() });
            }
        }

        assert!(matches!(lll_gram(&m(&[&[1, 2], &[2, 1]]), &d), Err(Error::NotPositiveDefinite)));
        assert!(lll_gram(&g, &rat(1, 4)).is_err());
    }

    #[test]
    fn checker_rejects_bad_output() {
        let d = rat(3, 4);
        let g = m(&[&[4, 2], &[2, 3]]);
        let mut out = lll_gram(&g, &d).unwrap();
        out.gram[1][1] = int(5);
        assert!(check_lll(&g, &out, &d).is_err());
        // Identity output is not reduced once delta exceeds 3/4.
        let fake = LllOutput { transform: vec![vec![BigInt::one(), BigInt::zero()], vec![BigInt::zero(), BigInt::one()]], gram: g.clone(), swaps: 0 };
        assert!(check_lll(&g, &fake, &rat(99, 100)).is_err());
        let sheared = LllOutput { transform: vec![vec![BigInt::one(), BigInt::zero()], vec![BigInt::one(), BigInt::one()]], gram: m(&[&[4, 6], &[6, 11]]), swaps: 0 };
        assert!(check_lll(&g, &sheared, &d).unwrap_err().contains("mu"));
    }

    #[test]
    fn reduce_polynomial_basis() {
        let i = iv(int(0), rat(1, 4));
        let gram = monic_gram(&i, 6).unwrap();
        let out = lll_reduce(&PolyBasis::power(6), &gram, &rat(3, 4)).unwrap();
        let det = determinant_bareiss(out.transform.clone());
        assert!(det.abs().is_one());
        // Vectors are the transform applied to the power basis.
        for (v, row) in out.vectors.iter().zip(&out.transform) {
            assert_eq!(v, &IntPolynomial::new(row.clone()));
        }
    }

    #[test]
    fn shifted_basis_degree_check() {
        let f = IntPolynomial::from_i64s(&[1, -3, 1]);
        let b = PolyBasis::shifted(&f, 3);
        assert_eq!((b.len(), b.ambient), (5, 5));
        let gram = monic_gram(&iv(int(0), rat(1, 2)), 4).unwrap();
        assert!(lll_reduce(&b, &gram, &rat(3, 4)).is_err());
        let gram = monic_gram(&iv(int(0), rat(1, 2)), 5).unwrap();
        assert!(lll_reduce(&b, &gram, &rat(3, 4)).is_ok());
    }

    #[test]
    fn factor_search_small() {
        let q = IntPolynomial::from_i64s(&[-1, 4]);
        let r = factor_search(&iv(int(0), rat(1, 4)), &q, 8, 3, &rat(3, 4)).unwrap();
        assert!(r.factors.contains(&IntPolynomial::x()));
        assert!(r.resultants.iter().all(|x| x.is_one()));

        let q = IntPolynomial::from_i64s(&[-1, 2]);
        let r = factor_search(&iv(int(0), int(1)), &q, 8, 3, &rat(3, 4)).unwrap();
        assert!(r.factors.contains(&IntPolynomial::x()));
        assert!(r.factors.contains(&IntPolynomial::from_i64s(&[-1, 1])));
        let sorted = {
            let mut s = r.factors.clone();
            s.sort_by(canonical_order);
            s
        };
        assert_eq!(sorted, r.factors);

        let r = factor_search(&iv(int(0), int(1)), &q, 8, 0, &rat(3, 4)).unwrap();
        assert!(r.factors.is_empty() && r.truncated);
        assert!(factor_search(&iv(int(0), int(1)), &q, 1, 3, &rat(3, 4)).is_err());
    }

    #[test]
    fn factor_search_is_deterministic() {
        let q = IntPolynomial::from_i64s(&[-1, 3]);
        let i = iv(int(0), rat(7, 18));
        let a = factor_search(&i, &q, 10, 3, &rat(3, 4)).unwrap();
        let b = factor_search(&i, &q, 10, 3, &rat(3, 4)).unwrap();
        assert_eq!(a, b);
    }

    fn arb_interval() -> impl Strategy<Value = RatInterval> {
        (-8i64..8, 1i64..16, 1i64..8).prop_map(|(a, w, d)| iv(rat(a, d), rat(a, d) + rat(w, 8)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn lll_output_is_verified(i in arb_interval(), k in 0usize..=8, dn in 26i64..=99) {
            let delta = rat(dn, 100);
            let gram = monic_gram(&i, k).unwrap();
            let out = lll_gram(&gram.g, &delta).unwrap();
            prop_assert!(check_lll(&gram.g, &out, &delta).is_ok());
        }

        #[test]
        fn first_vector_quality(i in arb_interval(), k in 0usize..=10) {
            let delta = rat(3, 4);
            let gram = monic_gram(&i, k).unwrap();
            let out = lll_gram(&gram.g, &delta).unwrap();
            let n = k + 1;
            let det = gram_det(&gram.g);
            let lhs = Pow::pow(&out.gram[0][0], n as u32);
            let rhs = Pow::pow(rat(2, 1), (k * n) as u32) * det;
            prop_assert!(lhs <= rhs);
        }
    }

    fn gram_det(g: &Matrix) -> Rational {
        let (_, bb) = gram_schmidt(g).unwrap();
        bb.iter().fold(Rational::one(), |acc, b| acc * b)
    }
}
