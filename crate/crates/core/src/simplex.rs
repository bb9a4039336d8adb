//! Dense dictionary simplex for `max c^t y` subject to `A y <= b`, `y >= 0`,
//! with Bland's rule, generic over `f64` and exact rationals.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Ordered field with a comparison tolerance.
pub trait LpNum:
    Clone
    + Debug
    + PartialOrd
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn eps() -> Self;

    fn is_pos(&self) -> bool {
        *self > Self::eps()
    }

    fn is_neg(&self) -> bool {
        *self < -Self::eps()
    }
}

impl LpNum for f64 {
    fn eps() -> Self {
        1e-11
    }
}

impl LpNum for Rational {
    fn eps() -> Self {
        Rational::zero()
    }
}

/// `max c^t y` subject to `A y <= b`, `y >= 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Lp<T> {
    pub a: Vec<Vec<T>>,
    pub b: Vec<T>,
    pub c: Vec<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution<T> {
    pub y: Vec<T>,
    pub objective: T,
    /// Nonbasic variables at the optimum: `j < n` is `y_j`, `n + r` is the
    /// slack of row `r`.
    pub nonbasic: Vec<usize>,
}

/// Dictionary `x_B = b - A_N x_N`, `z = z0 + c^t x_N`.
struct Dict<T> {
    a: Vec<Vec<T>>,
    b: Vec<T>,
    c: Vec<T>,
    z: T,
    basic: Vec<usize>,
    nonbasic: Vec<usize>,
}

impl<T: LpNum> Dict<T> {
    /// Pivot nonbasic column `j` in for basic row `i`.
    fn pivot(&mut self, i: usize, j: usize) {
        let inv = T::one() / self.a[i][j].clone();
        let ncols = self.nonbasic.len();
        self.b[i] = self.b[i].clone() * inv.clone();
        for k in 0..ncols {
            if k != j {
                self.a[i][k] = self.a[i][k].clone() * inv.clone();
            }
        }
        self.a[i][j] = inv;
        let row_i = self.a[i].clone();
        let bi = self.b[i].clone();
        for r in 0..self.a.len() {
            if r == i {
                continue;
            }
            let arj = self.a[r][j].clone();
            if arj.is_zero() {
                continue;
            }
            self.b[r] = self.b[r].clone() - arj.clone() * bi.clone();
            for k in 0..ncols {
                if k != j {
                    self.a[r][k] = self.a[r][k].clone() - arj.clone() * row_i[k].clone();
                }
            }
            self.a[r][j] = -(arj * row_i[j].clone());
        }
        let cj = self.c[j].clone();
        if !cj.is_zero() {
            self.z = self.z.clone() + cj.clone() * bi;
            for k in 0..ncols {
                if k != j {
                    self.c[k] = self.c[k].clone() - cj.clone() * row_i[k].clone();
                }
            }
            self.c[j] = -(cj * row_i[j].clone());
        }
        std::mem::swap(&mut self.basic[i], &mut self.nonbasic[j]);
    }

    /// Bland's rule iterations until optimal. Returns false if unbounded.
    fn optimize(&mut self, max_iter: usize) -> Result<bool> {
        for _ in 0..max_iter {
            let entering = (0..self.nonbasic.len()).filter(|&j| self.c[j].is_pos()).min_by_key(|&j| self.nonbasic[j]);
            let Some(j) = entering else { return Ok(true) };
            let mut best: Option<(usize, T)> = None;
            for i in 0..self.a.len() {
                if !self.a[i][j].is_pos() {
                    continue;
                }
                let ratio = self.b[i].clone() / self.a[i][j].clone();
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basic[i] < self.basic[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                None => return Ok(false),
                Some((i, _)) => self.pivot(i, j),
            }
        }
        Err(Error::InvalidArgument("simplex iteration limit reached".into()))
    }
}

/// Solves the LP with the two-phase dictionary method (auxiliary variable
/// for an infeasible origin).
pub fn simplex<T: LpNum>(lp: &Lp<T>) -> Result<LpSolution<T>> {
    let m = lp.a.len();
    let n = lp.c.len();
    if lp.b.len() != m || lp.a.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidArgument("LP dimensions disagree".into()));
    }
    let max_iter = 50 * (m + n + 10) * (m + n + 10);
    let aux = n + m;
    let mut d = Dict {
        a: lp.a.clone(),
        b: lp.b.clone(),
        c: vec![T::zero(); n],
        z: T::zero(),
        basic: (n..n + m).collect(),
        nonbasic: (0..n).collect(),
    };
    let worst = (0..m).filter(|&i| lp.b[i].is_neg()).min_by(|&i, &k| {
        lp.b[i].partial_cmp(&lp.b[k]).unwrap_or(std::cmp::Ordering::Equal)
    });
    if let Some(row) = worst {
        for r in d.a.iter_mut() {
            r.push(-T::one());
        }
        d.nonbasic.push(aux);
        d.c = vec![T::zero(); n + 1];
        d.c[n] = -T::one();
        d.pivot(row, n);
        if !d.optimize(max_iter)? {
            return Err(Error::Infeasible("auxiliary problem unbounded".into()));
        }
        if d.z.is_neg() {
            return Err(Error::Infeasible("phase one optimum is negative".into()));
        }
        if let Some(i) = d.basic.iter().position(|&v| v == aux) {
            let j = (0..d.nonbasic.len())
                .filter(|&j| !d.a[i][j].is_zero())
                .min_by_key(|&j| d.nonbasic[j])
                .ok_or_else(|| Error::Infeasible("cannot pivot out auxiliary variable".into()))?;
            d.pivot(i, j);
        }
        let col = d.nonbasic.iter().position(|&v| v == aux).expect("aux nonbasic");
        for r in d.a.iter_mut() {
            r.remove(col);
        }
        d.nonbasic.remove(col);
    }
    d.c = vec![T::zero(); n];
    d.z = T::zero();
    for (var, cv) in lp.c.iter().enumerate() {
        if cv.is_zero() {
            continue;
        }
        if let Some(j) = d.nonbasic.iter().position(|&v| v == var) {
            d.c[j] = d.c[j].clone() + cv.clone();
        } else {
            let i = d.basic.iter().position(|&v| v == var).expect("variable is basic");
            d.z = d.z.clone() + cv.clone() * d.b[i].clone();
            for j in 0..d.nonbasic.len() {
                d.c[j] = d.c[j].clone() - cv.clone() * d.a[i][j].clone();
            }
        }
    }
    if !d.optimize(max_iter)? {
        return Err(Error::Unbounded);
    }
    let mut y = vec![T::zero(); n];
    for (i, &v) in d.basic.iter().enumerate() {
        if v < n {
            y[v] = d.b[i].clone();
        }
    }
    let mut nonbasic = d.nonbasic.clone();
    nonbasic.sort_unstable();
    Ok(LpSolution { y, objective: d.z, nonbasic })
}

/// Solves `M x = r` exactly; `None` if `M` is singular.
pub fn solve_exact(m: &[Vec<Rational>], r: &[Rational]) -> Option<Vec<Rational>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m.iter().zip(r).map(|(row, v)| {
        let mut row = row.clone();
        row.push(v.clone());
        row
    }).collect();
    for col in 0..n {
        let p = (col..n).find(|&i| !a[i][col].is_zero())?;
        a.swap(col, p);
        let inv = Rational::one() / a[col][col].clone();
        for k in col..=n {
            a[col][k] = &a[col][k] * &inv;
        }
        for i in 0..n {
            if i != col && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for k in col..=n {
                    let v = &f * &a[col][k];
                    a[i][k] -= v;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n].clone()).collect())
}

/// Checks that the vertex defined by the active set `nonbasic` is optimal
/// for the exact LP and returns it.
///
/// The active constraints (zero structurals and tight rows) determine `y`;
/// optimality is certified by nonnegative multipliers on them.
pub fn verify_vertex(lp: &Lp<Rational>, nonbasic: &[usize]) -> Option<LpSolution<Rational>> {
    let n = lp.c.len();
    if nonbasic.len() != n {
        return None;
    }
    let unit = |j: usize| (0..n).map(|k| if k == j { Rational::one() } else { Rational::zero() }).collect::<Vec<_>>();
    let mut rows = Vec::with_capacity(n);
    let mut rhs = Vec::with_capacity(n);
    for &v in nonbasic {
        if v < n {
            rows.push(unit(v));
            rhs.push(Rational::zero());
        } else {
            rows.push(lp.a[v - n].clone());
            rhs.push(lp.b[v - n].clone());
        }
    }
    let y = solve_exact(&rows, &rhs)?;
    if y.iter().any(|v| v < &Rational::zero()) {
        return None;
    }
    for (row, bi) in lp.a.iter().zip(&lp.b) {
        let lhs: Rational = row.iter().zip(&y).map(|(a, x)| a * x).sum();
        if &lhs > bi {
            return None;
        }
    }
    // c = sum_r lambda_r A_r - sum_j nu_j e_j with lambda, nu >= 0.
    let mut cols = vec![vec![Rational::zero(); n]; n];
    for (k, &v) in nonbasic.iter().enumerate() {
        let col: Vec<Rational> = if v < n { unit(v).into_iter().map(|x| -x).collect() } else { lp.a[v - n].clone() };
        for i in 0..n {
            cols[i][k] = col[i].clone();
        }
    }
    let mult = solve_exact(&cols, &lp.c)?;
    if mult.iter().any(|v| v < &Rational::zero()) {
        return None;
    }
    let objective = lp.c.iter().zip(&y).map(|(c, x)| c * x).sum();
    Some(LpSolution { y, objective, nonbasic: nonbasic.to_vec() })
}

/// Solves an exact LP by floating-point simplex, then certifies the final
/// vertex in rational arithmetic, falling back to the rational simplex when
/// the floating-point basis does not verify.
pub fn solve_verified(lp: &Lp<Rational>) -> Result<(LpSolution<Rational>, bool)> {
    let lpf = Lp {
        a: lp.a.iter().map(|r| r.iter().map(crate::rational::to_f64).collect()).collect(),
        b: lp.b.iter().map(crate::rational::to_f64).collect(),
        c: lp.c.iter().map(crate::rational::to_f64).collect(),
    };
    if let Ok(sol) = simplex(&lpf) {
        if let Some(exact) = verify_vertex(lp, &sol.nonbasic) {
            return Ok((exact, true));
        }
    }
    log::debug!("floating-point vertex did not verify; running exact simplex");
    let sol = simplex(lp)?;
    Ok((sol, false))
}
