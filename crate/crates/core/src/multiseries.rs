//! Multivariate power series truncated by a weighted total degree.
//!
//! Each variable carries a positive integer weight and a monomial
//! `x^e` is kept iff `sum_i weight_i * e_i <= order`. The kept set is closed
//! under taking divisors, so products and the logarithm are well defined on it.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::algebra::Ring;
use crate::error::{Error, Result};

pub type Exponents = Vec<u32>;

#[derive(Clone, PartialEq, Debug)]
pub struct MultiSeries<C: Ring> {
    weights: Vec<u32>,
    order: u32,
    terms: BTreeMap<Exponents, C>,
}

/// Series in couplings with exact rational coefficients.
pub type CouplingSeries = MultiSeries<BigRational>;

impl<C: Ring> MultiSeries<C> {
    pub fn zero(weights: Vec<u32>, order: u32) -> Self {
        assert!(weights.iter().all(|&w| w > 0), "variable weights must be positive");
        Self {
            weights,
            order,
            terms: BTreeMap::new(),
        }
    }

    /// Unit-weight variables, truncation by total degree.
    pub fn zero_total(nvars: usize, order: u32) -> Self {
        Self::zero(vec![1; nvars], order)
    }

    pub fn constant(weights: Vec<u32>, order: u32, c: C) -> Self {
        let mut s = Self::zero(weights, order);
        let z = vec![0; s.nvars()];
        s.add_term(z, c);
        s
    }

    pub fn one_like(&self) -> Self {
        Self::constant(self.weights.clone(), self.order, C::ring_one())
    }

    pub fn zero_like(&self) -> Self {
        Self::zero(self.weights.clone(), self.order)
    }

    /// The series consisting of the single variable `i` (weight permitting).
    pub fn var(weights: Vec<u32>, order: u32, i: usize) -> Self {
        let mut s = Self::zero(weights, order);
        let mut e = vec![0; s.nvars()];
        e[i] = 1;
        s.add_term(e, C::ring_one());
        s
    }

    pub fn nvars(&self) -> usize {
        self.weights.len()
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn grade(&self, e: &[u32]) -> u64 {
        e.iter().zip(&self.weights).map(|(a, w)| *a as u64 * *w as u64).sum()
    }

    pub fn keeps(&self, e: &[u32]) -> bool {
        self.grade(e) <= self.order as u64
    }

    pub fn add_term(&mut self, e: Exponents, c: C) {
        assert_eq!(e.len(), self.nvars());
        if c.ring_is_zero() || !self.keeps(&e) {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(slot) => {
                let sum = slot.add_ref(&c);
                if sum.ring_is_zero() {
                    self.terms.remove(&e);
                } else {
                    *slot = sum;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn coeff(&self, e: &[u32]) -> C {
        self.terms.get(e).cloned().unwrap_or_else(C::ring_zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &C)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_term(&self) -> C {
        self.coeff(&vec![0; self.nvars()])
    }

    fn check_compatible(&self, other: &Self) {
        assert_eq!(self.weights, other.weights, "series over different variables");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let mut out = self.clone();
        out.order = self.order.min(other.order);
        out.terms.retain(|e, _| {
            e.iter().zip(&self.weights).map(|(a, w)| *a as u64 * *w as u64).sum::<u64>() <= out.order as u64
        });
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self {
            weights: self.weights.clone(),
            order: self.order,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        let mut out = self.zero_like();
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.scale(r));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let mut out = Self::zero(self.weights.clone(), self.order.min(other.order));
        for (e1, c1) in &self.terms {
            let g1 = self.grade(e1);
            if g1 > out.order as u64 {
                continue;
            }
            for (e2, c2) in &other.terms {
                if g1 + self.grade(e2) > out.order as u64 {
                    continue;
                }
                let e: Exponents = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1.mul_ref(c2));
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = self.one_like();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Smallest grade of a non-constant monomial, if any.
    fn min_positive_grade(&self) -> Option<u64> {
        self.terms.keys().map(|e| self.grade(e)).filter(|&g| g > 0).min()
    }

    /// Formal logarithm of a series whose constant term is one.
    pub fn log(&self) -> Result<Self> {
        if self.constant_term() != C::ring_one() {
            return Err(Error::Domain("log needs constant term 1".into()));
        }
        let x = self.sub(&self.one_like());
        let mut out = self.zero_like();
        let Some(g) = x.min_positive_grade() else {
            return Ok(out);
        };
        let kmax = self.order as u64 / g;
        let mut power = self.one_like();
        for k in 1..=kmax {
            power = power.mul(&x);
            let sign = if k % 2 == 1 { 1 } else { -1 };
            let r = BigRational::new(BigInt::from(sign), BigInt::from(k));
            out = out.add(&power.scale(&r));
        }
        Ok(out)
    }

    /// Formal exponential of a series with zero constant term.
    pub fn exp(&self) -> Result<Self> {
        if !self.constant_term().ring_is_zero() {
            return Err(Error::Domain("exp needs a zero constant term".into()));
        }
        let mut out = self.one_like();
        let Some(g) = self.min_positive_grade() else {
            return Ok(out);
        };
        let kmax = self.order as u64 / g;
        let mut power = self.one_like();
        let mut fact = BigInt::from(1);
        for k in 1..=kmax {
            power = power.mul(self);
            fact *= BigInt::from(k);
            out = out.add(&power.scale(&BigRational::new(BigInt::from(1), fact.clone())));
        }
        Ok(out)
    }

    /// Applies `f` to every coefficient.
    pub fn map_coeffs<D: Ring>(&self, f: impl Fn(&C) -> D) -> MultiSeries<D> {
        let mut out = MultiSeries::zero(self.weights.clone(), self.order);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }

    /// Restricts to a smaller truncation order.
    pub fn truncate(&self, order: u32) -> Self {
        let mut out = Self::zero(self.weights.clone(), order.min(self.order));
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, rat};

    #[test]
    fn log_exp_inverse() {
        let mut s: CouplingSeries = MultiSeries::zero_total(2, 5);
        s.add_term(vec![1, 0], rat(1, 2));
        s.add_term(vec![0, 1], int(3));
        s.add_term(vec![1, 1], rat(-2, 3));
        let back = s.exp().unwrap().log().unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn weighted_truncation() {
        // x has weight 1, y weight 2; order 3 keeps x^3, x y but not y^2.
        let x: CouplingSeries = MultiSeries::var(vec![1, 2], 3, 0);
        let y: CouplingSeries = MultiSeries::var(vec![1, 2], 3, 1);
        let p = x.add(&y).pow(2);
        assert_eq!(p.coeff(&[2, 0]), int(1));
        assert_eq!(p.coeff(&[1, 1]), int(2));
        assert_eq!(p.coeff(&[0, 2]), int(0));
    }

    #[test]
    fn log_of_one_plus_x() {
        let x: CouplingSeries = MultiSeries::var(vec![1], 4, 0);
        let l = x.add(&x.one_like()).log().unwrap();
        assert_eq!(l.coeff(&[1]), int(1));
        assert_eq!(l.coeff(&[2]), rat(-1, 2));
        assert_eq!(l.coeff(&[3]), rat(1, 3));
        assert_eq!(l.coeff(&[4]), rat(-1, 4));
    }
}
