//! Python bindings for `monictd`.
//!
//! Rationals cross the boundary as strings ("7/18", "0.303"), intervals as
//! "a,b" strings and polynomials as ascending coefficient lists of ints.

use num_bigint::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use monictd::certify::{self, Verdict};
use monictd::exponent::{self, GParams};
use monictd::rational::{self, Rational};
use monictd::{bounds, lattice, obstruction, realanalysis, Error, IntPolynomial, RatInterval, RealEnclosure};

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_rat(s: &str) -> PyResult<Rational> {
    rational::parse_rational(s).map_err(err)
}

fn parse_iv(s: &str) -> PyResult<RatInterval> {
    RatInterval::parse(s).map_err(err)
}

fn pair(e: &RealEnclosure) -> (String, String) {
    (e.lo_rational().to_string(), e.hi_rational().to_string())
}

fn coeffs(p: &IntPolynomial) -> Vec<BigInt> {
    p.coeffs().to_vec()
}

/// Integer polynomial with ascending coefficients.
#[pyclass(name = "Polynomial", frozen)]
#[derive(Clone)]
struct PyPolynomial {
    inner: IntPolynomial,
}

#[pymethods]
impl PyPolynomial {
    #[new]
    fn new(coeffs: Vec<BigInt>) -> Self {
        PyPolynomial { inner: IntPolynomial::new(coeffs) }
    }

    #[getter]
    fn coeffs(&self) -> Vec<BigInt> {
        coeffs(&self.inner)
    }

    #[getter]
    fn degree(&self) -> Option<usize> {
        self.inner.degree()
    }

    /// Exact value at a rational point, as a string.
    fn eval(&self, x: &str) -> PyResult<String> {
        Ok(self.inner.eval_rational(&parse_rat(x)?).to_string())
    }

    /// Enclosure `(lo, hi)` of the sup norm on the interval.
    #[pyo3(signature = (interval, precision = 256))]
    fn supnorm(&self, interval: &str, precision: u32) -> PyResult<(String, String)> {
        let v = realanalysis::supnorm_with_precision(&self.inner, &parse_iv(interval)?, precision).map_err(err)?;
        Ok(pair(&v))
    }

    fn resultant(&self, other: &PyPolynomial) -> PyResult<BigInt> {
        monictd::poly::resultant(&self.inner, &other.inner).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Polynomial({})", self.inner)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __eq__(&self, other: &PyPolynomial) -> bool {
        self.inner == other.inner
    }
}

/// Product `prod f_i^e_i` in factored form.
#[pyclass(name = "WeightedProduct", frozen)]
#[derive(Clone)]
struct PyWeightedProduct {
    inner: monictd::WeightedProduct,
}

#[pymethods]
impl PyWeightedProduct {
    #[new]
    fn new(factors: Vec<(Vec<BigInt>, u64)>) -> PyResult<Self> {
        let f = factors.into_iter().map(|(c, e)| (IntPolynomial::new(c), e)).collect();
        Ok(PyWeightedProduct { inner: monictd::WeightedProduct::new(f).map_err(err)? })
    }

    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        Ok(PyWeightedProduct { inner: monictd::WeightedProduct::from_json(s).map_err(err)? })
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn factors(&self) -> Vec<(Vec<BigInt>, u64)> {
        self.inner.factors().iter().map(|f| (coeffs(&f.poly), f.exp)).collect()
    }

    #[getter]
    fn total_degree(&self) -> u64 {
        self.inner.total_degree()
    }

    /// Enclosure of `max sum e_i log|f_i|` on the interval.
    #[pyo3(signature = (interval, precision = 256))]
    fn log_supnorm(&self, interval: &str, precision: u32) -> PyResult<(String, String)> {
        let v = realanalysis::log_supnorm_weighted_with_precision(&self.inner, &parse_iv(interval)?, precision)
            .map_err(err)?;
        Ok(pair(&v))
    }

    fn __repr__(&self) -> String {
        format!("WeightedProduct({})", self.inner.to_json())
    }
}

/// `(lower, upper)` bounds on `b_max(n)`.
#[pyfunction]
fn bmax_bounds(n: u32) -> PyResult<(String, String)> {
    let b = bounds::bmax_bounds(n).map_err(err)?;
    Ok((b.lower.to_string(), b.upper.to_string()))
}

#[pyfunction]
fn extra_lower_bound(b: &str) -> PyResult<(String, String)> {
    Ok(pair(&bounds::extra_lower_bound(&parse_rat(b)?).map_err(err)?))
}

/// Flagged Farey pairs `(p, q, r, s)`.
#[pyfunction]
fn farey_scan(n_max: u32) -> PyResult<Vec<(i64, i64, i64, i64)>> {
    Ok(bounds::farey_scan(n_max).map_err(err)?.into_iter().map(|f| (f.p, f.q, f.r, f.s)).collect())
}

/// Largest obstruction `(coeffs, a_d, d)` within the budget, if any.
#[pyfunction]
fn max_obstruction(interval: &str, d_max: u32, h_max: u32) -> PyResult<Option<(Vec<BigInt>, BigInt, u32)>> {
    let o = obstruction::max_obstruction_search(&parse_iv(interval)?, d_max, h_max).map_err(err)?;
    Ok(o.map(|o| (coeffs(&o.q), o.a_d().clone(), o.d())))
}

/// Factors with `|Res(f, q)| = 1` found by lattice reduction.
#[pyfunction]
#[pyo3(signature = (interval, q, k = 20, rounds = 5, delta = "3/4"))]
fn factor_search(interval: &str, q: Vec<BigInt>, k: usize, rounds: usize, delta: &str) -> PyResult<Vec<Vec<BigInt>>> {
    let r = lattice::factor_search(&parse_iv(interval)?, &IntPolynomial::new(q), k, rounds, &parse_rat(delta)?)
        .map_err(err)?;
    Ok(r.factors.iter().map(coeffs).collect())
}

/// Exchange-loop weights: `(alpha, m, rounds, converged)`.
#[pyfunction]
#[pyo3(signature = (interval, factors, q, eps = "1e-9", rounds = 50, precision = 256))]
fn optimize(
    interval: &str,
    factors: Vec<Vec<BigInt>>,
    q: Vec<BigInt>,
    eps: &str,
    rounds: usize,
    precision: u32,
) -> PyResult<(Vec<String>, f64, usize, bool)> {
    let f: Vec<IntPolynomial> = factors.into_iter().map(IntPolynomial::new).collect();
    let s = exponent::remez_iterate(
        &parse_iv(interval)?,
        &f,
        &IntPolynomial::new(q),
        &parse_rat(eps)?,
        None,
        rounds,
        &GParams::default(),
        precision,
    )
    .map_err(err)?;
    Ok((s.alpha.iter().map(|a| a.to_string()).collect(), s.m_f64(), s.history.len(), s.converged))
}

#[pyfunction]
fn rationalize_exponents(alpha: Vec<String>, degrees: Vec<usize>, denom_limit: u64) -> PyResult<Vec<u64>> {
    let a = alpha.iter().map(|s| parse_rat(s)).collect::<PyResult<Vec<_>>>()?;
    exponent::rationalize_exponents(&a, &degrees, &BigInt::from(denom_limit)).map_err(err)
}

/// Certificate JSON for `product` on `interval` against `nx - 1`.
#[pyfunction]
#[pyo3(signature = (product, interval, n, tol = "2^-64"))]
fn verify_attaining(product: &PyWeightedProduct, interval: &str, n: u32, tol: &str) -> PyResult<String> {
    let tol = monictd::cli::parse_tol(tol).map_err(err)?;
    let c = certify::verify_attaining(&product.inner, &parse_iv(interval)?, n, &tol).map_err(err)?;
    Ok(c.to_json())
}

/// Verdict of a certificate recomputed from its contents.
#[pyfunction]
fn check_certificate(json: &str) -> PyResult<String> {
    let c = certify::Certificate::from_json(json).map_err(err)?;
    let v = certify::check_certificate(&c).map_err(err)?;
    Ok(serde_json::to_value(v).expect("serializable").as_str().unwrap_or_default().to_string())
}

/// `(n, b, product)` for each built-in table entry.
#[pyfunction]
fn builtin_table() -> Vec<(u32, String, PyWeightedProduct)> {
    certify::builtin_table()
        .into_iter()
        .map(|e| (e.n, e.b.to_string(), PyWeightedProduct { inner: e.product }))
        .collect()
}

/// `(verdict, b, extended_b)` for table entry `n`.
#[pyfunction]
fn certify_table_entry(n: u32) -> PyResult<(String, String, Option<String>)> {
    let c = certify::certify_bmax_lower(n, &certify::default_tol()).map_err(err)?;
    let v = match c.certificate.verdict {
        Verdict::Certified => "certified",
        Verdict::Refuted => "refuted",
        Verdict::Undecided => "undecided",
    };
    Ok((v.to_string(), c.b.to_string(), c.extended_b.map(|b| b.to_string())))
}

#[pymodule]
#[pyo3(name = "monictd")]
fn monictd_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPolynomial>()?;
    m.add_class::<PyWeightedProduct>()?;
    m.add_function(wrap_pyfunction!(bmax_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(extra_lower_bound, m)?)?;
    m.add_function(wrap_pyfunction!(farey_scan, m)?)?;
    m.add_function(wrap_pyfunction!(max_obstruction, m)?)?;
    m.add_function(wrap_pyfunction!(factor_search, m)?)?;
    m.add_function(wrap_pyfunction!(optimize, m)?)?;
    m.add_function(wrap_pyfunction!(rationalize_exponents, m)?)?;
    m.add_function(wrap_pyfunction!(verify_attaining, m)?)?;
    m.add_function(wrap_pyfunction!(check_certificate, m)?)?;
    m.add_function(wrap_pyfunction!(builtin_table, m)?)?;
    m.add_function(wrap_pyfunction!(certify_table_entry, m)?)?;
    Ok(())
}
