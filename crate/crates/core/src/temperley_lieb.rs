//! Gram matrix of the arch basis and the meander determinant.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::algebra::{binomial, LaurentPoly, QPolynomial};
use crate::arch::{catalan, count_loops, enumerate_arches, ArchConfig};
use crate::error::{Error, Result};
use crate::limits::WorkLimit;

/// Gram matrix `(a, b) = q^{c(a,b)}` in the lexicographic arch basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramMatrix {
    n: usize,
    basis: Vec<ArchConfig>,
    exponents: Vec<Vec<usize>>,
}

impl GramMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[ArchConfig] {
        &self.basis
    }

    /// Power of `q` in entry `(i, j)`.
    pub fn exponent(&self, i: usize, j: usize) -> usize {
        self.exponents[i][j]
    }

    pub fn entry(&self, i: usize, j: usize) -> QPolynomial {
        LaurentPoly::monomial(self.exponents[i][j] as i64, BigRational::one())
    }

    /// Entries evaluated at a rational `q`.
    pub fn eval(&self, q: &BigRational) -> Vec<Vec<BigRational>> {
        let powers: Vec<BigRational> = (0..=self.n as i32).map(|k| num_traits::pow(q.clone(), k as usize)).collect();
        self.exponents
            .iter()
            .map(|row| row.iter().map(|&e| powers[e].clone()).collect())
            .collect()
    }
}

pub fn gram_matrix(n: usize, limit: &WorkLimit) -> Result<GramMatrix> {
    if n == 0 {
        return Err(Error::InvalidInput("Gram matrix needs n >= 1".into()));
    }
    let c = catalan(n as u64).to_u128().unwrap_or(u128::MAX);
    limit.check("Gram matrix entries", c.saturating_mul(c))?;
    let basis: Vec<ArchConfig> = enumerate_arches(n)?.collect();
    let exponents = basis
        .par_iter()
        .map(|a| basis.iter().map(|b| count_loops(a.raw(), b.raw())).collect())
        .collect();
    Ok(GramMatrix { n, basis, exponents })
}

/// Dense integer polynomial, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
struct IntPoly(Vec<BigInt>);

impl IntPoly {
    fn monomial(e: usize) -> Self {
        let mut v = vec![BigInt::zero(); e + 1];
        v[e] = BigInt::one();
        IntPoly(v)
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn trim(mut self) -> Self {
        while self.0.last().is_some_and(Zero::is_zero) {
            self.0.pop();
        }
        self
    }

    fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return IntPoly(Vec::new());
        }
        let mut out = vec![BigInt::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        IntPoly(out).trim()
    }

    fn sub(&self, other: &Self) -> Self {
        let len = self.0.len().max(other.0.len());
        let mut out = vec![BigInt::zero(); len];
        for (i, a) in self.0.iter().enumerate() {
            out[i] += a;
        }
        for (i, b) in other.0.iter().enumerate() {
            out[i] -= b;
        }
        IntPoly(out).trim()
    }

    fn neg(&self) -> Self {
        IntPoly(self.0.iter().map(|c| -c).collect())
    }

    /// Exact quotient; the division must leave no remainder.
    fn div_exact(&self, d: &Self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let dl = d.0.len();
        let lead = d.0.last().expect("nonzero divisor");
        let mut rem = self.0.clone();
        let mut q = vec![BigInt::zero(); rem.len() + 1 - dl];
        for k in (0..q.len()).rev() {
            let top = &rem[k + dl - 1];
            if top.is_zero() {
                continue;
            }
            let (c, r) = top.div_rem(lead);
            debug_assert!(r.is_zero(), "inexact polynomial division");
            for (i, dc) in d.0.iter().enumerate() {
                rem[k + i] -= &c * dc;
            }
            q[k] = c;
        }
        debug_assert!(rem.iter().all(Zero::is_zero));
        IntPoly(q).trim()
    }

    fn to_qpoly(&self) -> QPolynomial {
        LaurentPoly::from_terms(
            self.0
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i as i64, BigRational::from_integer(c.clone()))),
        )
    }
}

/// Determinant by fraction-free Bareiss elimination with row pivoting.
fn bareiss_poly(mut m: Vec<Vec<IntPoly>>) -> IntPoly {
    let dim = m.len();
    let mut negate = false;
    let mut prev = IntPoly::monomial(0);
    for k in 0..dim {
        if m[k][k].is_zero() {
            match (k + 1..dim).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    negate = !negate;
                }
                None => return IntPoly(Vec::new()),
            }
        }
        let (head, tail) = m.split_at_mut(k + 1);
        let pivot_row = &head[k];
        tail.par_iter_mut().for_each(|row| {
            for j in k + 1..dim {
                let num = pivot_row[k].mul(&row[j]).sub(&row[k].mul(&pivot_row[j]));
                row[j] = num.div_exact(&prev);
            }
            row[k] = IntPoly(Vec::new());
        });
        prev = m[k][k].clone();
    }
    let det = m[dim - 1][dim - 1].clone();
    if negate {
        det.neg()
    } else {
        det
    }
}

/// Work estimate for the direct determinant: `dim^3` polynomial operations on
/// polynomials of degree up to `n * dim`.
pub fn direct_determinant_work(n: usize) -> u128 {
    let c = catalan(n as u64).to_u128().unwrap_or(u128::MAX);
    c.saturating_pow(3).saturating_mul(n as u128 * c)
}

/// Gram determinant computed by exact elimination over integer polynomials in `q`.
pub fn meander_determinant_direct(n: usize, limit: &WorkLimit) -> Result<QPolynomial> {
    if n == 0 {
        return Err(Error::InvalidInput("meander determinant needs n >= 1".into()));
    }
    limit.check("direct meander determinant", direct_determinant_work(n))?;
    let g = gram_matrix(n, limit)?;
    let m = g
        .exponents
        .iter()
        .map(|row| row.iter().map(|&e| IntPoly::monomial(e)).collect())
        .collect();
    Ok(bareiss_poly(m).to_qpoly())
}

/// Chebyshev polynomials `U_0 ..= U_m` of the second kind in `q`.
pub fn chebyshev_u(m: usize) -> Vec<QPolynomial> {
    let q = LaurentPoly::var();
    let mut u = vec![QPolynomial::one(), q.clone()];
    while u.len() <= m {
        let k = u.len();
        let next = &(&q * &u[k - 1]) - &u[k - 2];
        u.push(next);
    }
    u.truncate(m + 1);
    u
}

/// Exponent of `U_m` in the meander determinant of order `2n`.
pub fn chebyshev_exponent(m: usize, n: usize) -> BigInt {
    let (m, n) = (m as i64, n as i64);
    binomial(2 * n, n - m) - BigInt::from(2) * binomial(2 * n, n - m - 1) + binomial(2 * n, n - m - 2)
}

fn chebyshev_u_int(m: usize) -> Vec<IntPoly> {
    let q = IntPoly::monomial(1);
    let mut u = vec![IntPoly::monomial(0), q.clone()];
    while u.len() <= m {
        let k = u.len();
        let next = q.mul(&u[k - 1]).sub(&u[k - 2]);
        u.push(next);
    }
    u.truncate(m + 1);
    u
}

/// `Π_{m=1}^{n} U_m(q)^{a_{m,n}}`. Some exponents are negative from `n = 8` on;
/// the corresponding factors divide the product of the others.
pub fn meander_determinant_formula(n: usize) -> Result<QPolynomial> {
    if n == 0 {
        return Err(Error::InvalidInput("meander determinant needs n >= 1".into()));
    }
    let u = chebyshev_u_int(n);
    let mut num = IntPoly::monomial(0);
    let mut den = IntPoly::monomial(0);
    for (m, um) in u.iter().enumerate().skip(1) {
        let a = chebyshev_exponent(m, n)
            .to_i64()
            .ok_or_else(|| Error::Unsupported("Chebyshev exponent too large".into()))?;
        let target = if a >= 0 { &mut num } else { &mut den };
        for _ in 0..a.unsigned_abs() {
            *target = target.mul(um);
        }
    }
    Ok(num.div_exact(&den).to_qpoly())
}

/// The product formula evaluated at a rational point.
pub fn meander_determinant_formula_at(n: usize, q: &BigRational) -> Result<BigRational> {
    Ok(meander_determinant_formula(n)?.eval(q))
}

/// Determinant of an integer matrix by Bareiss elimination.
fn bareiss_int(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let dim = m.len();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..dim {
        if m[k][k].is_zero() {
            match (k + 1..dim).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        let (head, tail) = m.split_at_mut(k + 1);
        let pivot_row = &head[k];
        tail.par_iter_mut().for_each(|row| {
            for j in k + 1..dim {
                row[j] = (&pivot_row[k] * &row[j] - &row[k] * &pivot_row[j]) / &prev;
            }
            row[k] = BigInt::zero();
        });
        prev = m[k][k].clone();
    }
    let det = m[dim - 1][dim - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// Gram determinant at a rational `q` by exact elimination.
pub fn meander_determinant_at(n: usize, q: &BigRational, limit: &WorkLimit) -> Result<BigRational> {
    let g = gram_matrix(n, limit)?;
    let c = g.dim() as u128;
    limit.check("numeric meander determinant", c.saturating_pow(3))?;
    // Clear denominators: q = a/b, entry q^e * b^n = a^e b^(n-e).
    let (a, b) = (q.numer().clone(), q.denom().clone());
    let m = g
        .exponents
        .iter()
        .map(|row| {
            row.iter()
                .map(|&e| num_traits::pow(a.clone(), e) * num_traits::pow(b.clone(), n - e))
                .collect()
        })
        .collect();
    let det = bareiss_int(m);
    let scale = num_traits::pow(b, n * g.dim());
    Ok(BigRational::new(det, scale))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, rat};

    fn lim() -> WorkLimit {
        WorkLimit::default()
    }

    fn q_poly(terms: &[(i64, i64)]) -> QPolynomial {
        LaurentPoly::from_terms(terms.iter().map(|&(e, c)| (e, int(c))))
    }

    #[test]
    fn gram_small() {
        let g1 = gram_matrix(1, &lim()).unwrap();
        assert_eq!(g1.dim(), 1);
        assert_eq!(g1.exponent(0, 0), 1);
        let g2 = gram_matrix(2, &lim()).unwrap();
        assert_eq!(g2.exponents, vec![vec![2, 1], vec![1, 2]]);
        let g3 = gram_matrix(3, &lim()).unwrap();
        assert_eq!(g3.dim(), 5);
        for i in 0..5 {
            assert_eq!(g3.exponent(i, i), 3);
            for j in 0..5 {
                assert_eq!(g3.exponent(i, j), g3.exponent(j, i));
                assert!((1..=3).contains(&g3.exponent(i, j)));
            }
        }
    }

    #[test]
    fn exponents_at_boundary() {
        assert_eq!(chebyshev_exponent(1, 1), BigInt::from(1));
        assert_eq!(chebyshev_exponent(1, 2), BigInt::from(2));
        assert_eq!(chebyshev_exponent(2, 2), BigInt::from(1));
        for n in 1..=7 {
            for m in 1..=n {
                assert!(chebyshev_exponent(m, n) >= BigInt::zero());
            }
        }
        assert_eq!(chebyshev_exponent(1, 8), BigInt::from(-208));
    }

    #[test]
    fn chebyshev_special_values() {
        let u = chebyshev_u(10);
        for (m, um) in u.iter().enumerate() {
            assert_eq!(um.eval(&int(2)), int(m as i64 + 1));
            let at0 = [1, 0, -1, 0][m % 4];
            assert_eq!(um.eval(&int(0)), int(at0));
            let sign = if m % 2 == 0 { 1 } else { -1 };
            assert_eq!(um.eval(&int(-2)), int(sign * (m as i64 + 1)));
        }
        // q = 1 is 2cos(π/3): period 6 pattern 1, 1, 0, -1, -1, 0.
        for (m, um) in u.iter().enumerate() {
            assert_eq!(um.eval(&int(1)), int([1, 1, 0, -1, -1, 0][m % 6]));
        }
    }

    #[test]
    fn formula_small() {
        assert_eq!(meander_determinant_formula(1).unwrap(), q_poly(&[(1, 1)]));
        assert_eq!(meander_determinant_formula(2).unwrap(), q_poly(&[(4, 1), (2, -1)]));
        let d5 = meander_determinant_formula(5).unwrap();
        assert_eq!(d5.degree(), Some(5 * 42));
        // Negative exponents still give a polynomial of degree n * catalan(n).
        let d8 = meander_determinant_formula(8).unwrap();
        assert_eq!(d8.degree(), Some(8 * 1430));
        assert!(d8.low_degree().unwrap() >= 0);
    }

    #[test]
    fn direct_small() {
        assert_eq!(meander_determinant_direct(1, &lim()).unwrap(), q_poly(&[(1, 1)]));
        assert_eq!(meander_determinant_direct(2, &lim()).unwrap(), q_poly(&[(4, 1), (2, -1)]));
    }

    #[test]
    fn direct_equals_formula() {
        for n in 1..=4 {
            assert_eq!(
                meander_determinant_direct(n, &lim()).unwrap(),
                meander_determinant_formula(n).unwrap(),
                "order {n}"
            );
        }
    }

    #[test]
    fn numeric_determinant_matches_formula() {
        for n in 1..=4 {
            for q in [int(2), int(3), int(-1), rat(1, 2)] {
                assert_eq!(
                    meander_determinant_at(n, &q, &lim()).unwrap(),
                    meander_determinant_formula_at(n, &q).unwrap()
                );
            }
        }
    }

    #[test]
    fn size_guard() {
        let tight = WorkLimit::new(100).unwrap();
        assert!(meander_determinant_direct(4, &tight).unwrap_err().is_resource_limit());
        assert!(gram_matrix(0, &lim()).is_err());
    }

    #[test]
    fn integer_polynomial_division() {
        let a = IntPoly(vec![int(1).to_integer(), int(2).to_integer(), int(1).to_integer()]);
        let b = IntPoly(vec![BigInt::one(), BigInt::one()]);
        assert_eq!(a.div_exact(&b), b);
        assert_eq!(a.mul(&b).div_exact(&a), b);
    }
}
