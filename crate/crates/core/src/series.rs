//! Univariate power series with exact rational coefficients, truncated at a
//! tracked order.
//!
//! A series of order `M` knows its coefficients of `x^0 ..= x^M`; everything
//! above is unknown, not zero. Binary operations return a result whose order
//! is the minimum of the operands' orders, so precision loss is never silent.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct PowerSeries {
    coeffs: Vec<BigRational>,
}

impl PowerSeries {
    /// Builds a series of the given order; missing coefficients are zero.
    pub fn new(mut coeffs: Vec<BigRational>, order: usize) -> Self {
        coeffs.resize(order + 1, BigRational::zero());
        coeffs.truncate(order + 1);
        Self { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self::new(Vec::new(), order)
    }

    pub fn constant(c: BigRational, order: usize) -> Self {
        Self::new(vec![c], order)
    }

    pub fn one(order: usize) -> Self {
        Self::constant(BigRational::one(), order)
    }

    /// The series `x`.
    pub fn var(order: usize) -> Self {
        Self::new(vec![BigRational::zero(), BigRational::one()], order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &BigRational {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new(self.coeffs[..=order.min(self.order())].to_vec(), order.min(self.order()))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Multiplies by `x^k`; the order grows by `k`.
    pub fn shift_up(&self, k: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    /// Divides by `x^k`. The first `k` coefficients must vanish; the order drops by `k`.
    pub fn shift_down(&self, k: usize) -> Result<Self> {
        if k > self.order() {
            return Err(Error::Domain(format!(
                "cannot divide a series of order {} by x^{k}",
                self.order()
            )));
        }
        if let Some(i) = (0..k).find(|&i| !self.coeffs[i].is_zero()) {
            return Err(Error::Consistency(format!(
                "coefficient of x^{i} is {} but must vanish before dividing by x^{k}",
                self.coeffs[i]
            )));
        }
        Ok(Self {
            coeffs: self.coeffs[k..].to_vec(),
        })
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::Domain("series with zero constant term has no inverse".into()));
        }
        let m = self.order();
        let inv0 = c0.recip();
        let mut out = vec![BigRational::zero(); m + 1];
        out[0] = inv0.clone();
        for n in 1..=m {
            let mut acc = BigRational::zero();
            for k in 1..=n {
                if !self.coeffs[k].is_zero() {
                    acc += &self.coeffs[k] * &out[n - k];
                }
            }
            out[n] = -acc * &inv0;
        }
        Ok(Self { coeffs: out })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inverse()?)
    }

    /// `x d/dx`.
    pub fn x_deriv(&self) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
                .collect(),
        }
    }

    /// Logarithm of a series with constant term 1.
    pub fn log(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::Domain(format!(
                "log needs constant term 1, got {}",
                self.coeffs[0]
            )));
        }
        // x (log f)' = x f' / f, then divide coefficient k by k.
        let q = &self.x_deriv() * &self.inverse()?;
        let mut coeffs = vec![BigRational::zero(); self.order() + 1];
        for k in 1..=self.order() {
            coeffs[k] = &q.coeffs[k] / BigRational::from_integer(BigInt::from(k));
        }
        Ok(Self { coeffs })
    }

    /// Exponential of a series with zero constant term.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Domain("exp needs a zero constant term".into()));
        }
        // n e_n = sum_{k=1}^n k f_k e_{n-k}
        let m = self.order();
        let mut e = vec![BigRational::zero(); m + 1];
        e[0] = BigRational::one();
        for n in 1..=m {
            let mut acc = BigRational::zero();
            for k in 1..=n {
                if !self.coeffs[k].is_zero() {
                    acc += BigRational::from_integer(BigInt::from(k)) * &self.coeffs[k] * &e[n - k];
                }
            }
            e[n] = acc / BigRational::from_integer(BigInt::from(n));
        }
        Ok(Self { coeffs: e })
    }

    /// Square root of a series with constant term 1 (the branch with constant term 1).
    pub fn sqrt(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::Domain("sqrt needs constant term 1".into()));
        }
        let m = self.order();
        let mut s = vec![BigRational::zero(); m + 1];
        s[0] = BigRational::one();
        let two = BigRational::from_integer(BigInt::from(2));
        for n in 1..=m {
            let mut acc = self.coeffs[n].clone();
            for k in 1..n {
                acc -= &s[k] * &s[n - k];
            }
            s[n] = acc / &two;
        }
        Ok(Self { coeffs: s })
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.order());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }
}

impl fmt::Debug for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}] + O(x^{})", parts.join(", "), self.order() + 1)
    }
}

impl<'a> Add<&'a PowerSeries> for &'a PowerSeries {
    type Output = PowerSeries;
    fn add(self, rhs: &PowerSeries) -> PowerSeries {
        let m = self.order().min(rhs.order());
        PowerSeries {
            coeffs: (0..=m).map(|k| &self.coeffs[k] + &rhs.coeffs[k]).collect(),
        }
    }
}

impl<'a> Sub<&'a PowerSeries> for &'a PowerSeries {
    type Output = PowerSeries;
    fn sub(self, rhs: &PowerSeries) -> PowerSeries {
        let m = self.order().min(rhs.order());
        PowerSeries {
            coeffs: (0..=m).map(|k| &self.coeffs[k] - &rhs.coeffs[k]).collect(),
        }
    }
}

impl<'a> Mul<&'a PowerSeries> for &'a PowerSeries {
    type Output = PowerSeries;
    fn mul(self, rhs: &PowerSeries) -> PowerSeries {
        let m = self.order().min(rhs.order());
        let mut out = vec![BigRational::zero(); m + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(m + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(m + 1 - i) {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        PowerSeries { coeffs: out }
    }
}

impl Neg for &PowerSeries {
    type Output = PowerSeries;
    fn neg(self) -> PowerSeries {
        PowerSeries {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}
