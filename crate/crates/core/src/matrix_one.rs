//! The one-Hermitian-matrix model solved with orthogonal polynomials.
//!
//! Potentials are even, `V(x) = x²/2 - Σ_i g_{2i} x^{2i} / (2i)`, so that a
//! positive coupling counts maps with positive weight. The alternative
//! convention `V = x²/2 + Σ g_k x^k / k` corresponds to flipping every sign.
//!
//! All results are exact truncated series in the couplings. A series over the
//! couplings whose coefficients also depend on `z` stores, for the monomial
//! `Π g_{2i}^{α_i}`, the coefficient of `z^{w(α)}` with `w(α) = Σ α_i (i - 1)`:
//! this is the only power of `z` that multiplies that monomial in `r(z)/z`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::algebra::binomial;
use crate::error::{Error, Result};
use crate::multiseries::{CouplingSeries, MultiSeries};

fn ri(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Even potential given by the valencies `2i` of its couplings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvenPotential {
    valencies: Vec<u32>,
}

impl EvenPotential {
    pub fn new(valencies: Vec<u32>) -> Result<Self> {
        if let Some(&v) = valencies.iter().find(|&&v| v % 2 == 1) {
            return Err(Error::Unsupported(format!("odd coupling of valency {v}; only even potentials are solved")));
        }
        if valencies.iter().any(|&v| v < 2) {
            return Err(Error::InvalidInput("coupling valencies must be at least 2".into()));
        }
        let mut sorted = valencies.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != valencies.len() {
            return Err(Error::InvalidInput("repeated coupling valency".into()));
        }
        Ok(Self { valencies })
    }

    /// `V = x²/2 - g x⁴/4`.
    pub fn quartic() -> Self {
        Self { valencies: vec![4] }
    }

    pub fn valencies(&self) -> &[u32] {
        &self.valencies
    }

    pub fn nvars(&self) -> usize {
        self.valencies.len()
    }

    fn zero(&self, order: u32) -> CouplingSeries {
        MultiSeries::zero_total(self.nvars(), order)
    }

    fn coupling(&self, k: usize, order: u32) -> CouplingSeries {
        MultiSeries::var(vec![1; self.nvars()], order, k)
    }

    /// Power of `z` attached to a coupling monomial.
    pub fn z_weight(&self, e: &[u32]) -> u32 {
        e.iter().zip(&self.valencies).map(|(a, v)| a * (v / 2 - 1)).sum()
    }
}

/// Planar solution `r(z) = z u(z)` with `u = 1 + Σ_i C(2i-1, i) g_{2i} z^{i-1} u^i`.
#[derive(Clone, Debug, PartialEq)]
pub struct PlanarR {
    potential: EvenPotential,
    u: CouplingSeries,
}

impl PlanarR {
    /// `r(z)/z` with the `z` dependence implicit in each monomial.
    pub fn u(&self) -> &CouplingSeries {
        &self.u
    }

    pub fn potential(&self) -> &EvenPotential {
        &self.potential
    }

    /// `r(z)` at a rational `z`, as a series in the couplings.
    pub fn at(&self, z: &BigRational) -> CouplingSeries {
        let mut out = self.u.zero_like();
        for (e, c) in self.u.terms() {
            let w = self.potential.z_weight(e);
            out.add_term(e.clone(), c * num_traits::pow(z.clone(), w as usize + 1));
        }
        out
    }
}

pub fn planar_r_series(potential: &EvenPotential, order: u32) -> PlanarR {
    let one = potential.zero(order).one_like();
    let mut u = one.clone();
    for _ in 0..=order {
        let mut next = one.clone();
        for (k, &v) in potential.valencies.iter().enumerate() {
            let i = (v / 2) as i64;
            let c = BigRational::from_integer(binomial(2 * i - 1, i));
            next = next.add(&potential.coupling(k, order).scale(&c).mul(&u.pow(i as u32)));
        }
        u = next;
    }
    PlanarR {
        potential: potential.clone(),
        u,
    }
}

/// `f_0 = ∫_0^1 (1 - z) log(r(z)/z) dz`.
pub fn planar_free_energy(potential: &EvenPotential, order: u32) -> Result<CouplingSeries> {
    let r = planar_r_series(potential, order);
    let log_u = r.u.log()?;
    let mut out = potential.zero(order);
    for (e, c) in log_u.terms() {
        let w = potential.z_weight(e) as i64;
        out.add_term(e.clone(), c / ri((w + 1) * (w + 2)));
    }
    Ok(out)
}

/// Planar moment `lim (1/N) <Tr M^n> = C(2p, p) ∫_0^1 r(z)^p dz` for `n = 2p`.
pub fn planar_moments(potential: &EvenPotential, n: u32, order: u32) -> CouplingSeries {
    if n % 2 == 1 {
        return potential.zero(order);
    }
    let p = n / 2;
    let r = planar_r_series(potential, order);
    let up = r.u.pow(p);
    let c = BigRational::from_integer(binomial(2 * p as i64, p as i64));
    let mut out = potential.zero(order);
    for (e, d) in up.terms() {
        let w = potential.z_weight(e) as i64;
        out.add_term(e.clone(), &c * d / ri(p as i64 + w + 1));
    }
    out
}

/// Finite-`N` recursion coefficients `r_1 ..= r_{m_max}` from
/// `m/N = r_m - Σ_i g_{2i} W_{2i-1}(m)`, where `W_L(m)` sums over lattice paths
/// of length `L` from `m` to `m - 1` with weight `r_j` for each step down from `j`.
pub fn string_equation_finite_n(
    potential: &EvenPotential,
    n: u64,
    m_max: usize,
    order: u32,
) -> Result<Vec<CouplingSeries>> {
    if n == 0 {
        return Err(Error::InvalidInput("matrix size N must be positive".into()));
    }
    let reach = potential.valencies.iter().map(|&v| (v / 2) as usize - 1).max().unwrap_or(0);
    let top = m_max + reach * (order as usize + 1);
    let nn = BigRational::from_integer(BigInt::from(n));
    let gaussian: Vec<CouplingSeries> = (0..=top)
        .map(|m| potential.zero(order).one_like().scale(&(ri(m as i64) / &nn)))
        .collect();
    let mut r = gaussian.clone();
    r[0] = potential.zero(order);
    for _ in 0..order {
        let mut next = gaussian.clone();
        next[0] = potential.zero(order);
        for m in 1..=top {
            for (k, &v) in potential.valencies.iter().enumerate() {
                let w = path_sum(&r, m, v as usize - 1, potential.zero(order));
                next[m] = next[m].add(&potential.coupling(k, order).mul(&w));
            }
        }
        r = next;
    }
    Ok(r[1..=m_max].to_vec())
}

/// Weighted paths of length `len` from `m` to `m - 1`; heights beyond the table
/// are never reached for the orders requested by the caller.
fn path_sum(r: &[CouplingSeries], m: usize, len: usize, zero: CouplingSeries) -> CouplingSeries {
    let top = r.len() - 1;
    let mut dp: Vec<Option<CouplingSeries>> = vec![None; top + 2];
    dp[m] = Some(zero.one_like());
    for step in 0..len {
        let remaining = len - step - 1;
        let mut next: Vec<Option<CouplingSeries>> = vec![None; top + 2];
        for (h, cur) in dp.iter().enumerate() {
            let Some(cur) = cur else { continue };
            if h < top {
                let t = h + 1;
                if t.abs_diff(m - 1) <= remaining {
                    let v = next[t].take().map_or_else(|| cur.clone(), |x| x.add(cur));
                    next[t] = Some(v);
                }
            }
            if h >= 1 {
                let t = h - 1;
                if t.abs_diff(m - 1) <= remaining {
                    let term = cur.mul(&r[h]);
                    let v = next[t].take().map_or_else(|| term.clone(), |x| x.add(&term));
                    next[t] = Some(v);
                }
            }
        }
        dp = next;
    }
    dp[m - 1].take().unwrap_or(zero)
}

/// `(2k - 1)!!`.
fn double_factorial_odd(k: u32) -> BigInt {
    (1..2 * k as i64).step_by(2).fold(BigInt::one(), |acc, j| acc * j)
}

/// `log <exp(N Σ_i g_{2i} x^{2i} / (2i))>` for a scalar Gaussian of variance `1/N`.
fn log_h0_ratio(potential: &EvenPotential, n: u64, order: u32) -> Result<CouplingSeries> {
    let nn = BigRational::from_integer(BigInt::from(n));
    let mut z = potential.zero(order);
    let mut stack: Vec<Vec<u32>> = vec![Vec::new()];
    while let Some(e) = stack.pop() {
        if e.len() == potential.nvars() {
            let mut c = BigRational::one();
            let mut power = 0u32;
            for (&a, &v) in e.iter().zip(&potential.valencies) {
                for j in 1..=a {
                    c = c * &nn / (ri(v as i64) * ri(j as i64));
                }
                power += a * v;
            }
            let k = power / 2;
            c = c * BigRational::from_integer(double_factorial_odd(k)) / num_traits::pow(nn.clone(), k as usize);
            z.add_term(e, c);
            continue;
        }
        let used: u32 = e.iter().sum();
        for a in 0..=order - used {
            let mut f = e.clone();
            f.push(a);
            stack.push(f);
        }
    }
    z.log()
}

/// `log(Z_N / Z_N^{Gauss})` at finite `N` from the recursion coefficients:
/// `N log(h_0/h_0^G) + Σ_{i=1}^{N-1} (N - i) log(N r_i / i)`.
pub fn finite_n_free_energy(potential: &EvenPotential, n: u64, order: u32) -> Result<CouplingSeries> {
    let mut f = log_h0_ratio(potential, n, order)?.scale(&ri(n as i64));
    if n > 1 {
        let r = string_equation_finite_n(potential, n, (n - 1) as usize, order)?;
        for (idx, ri_series) in r.iter().enumerate() {
            let i = idx as i64 + 1;
            let normalised = ri_series.scale(&(ri(n as i64) / ri(i)));
            f = f.add(&normalised.log()?.scale(&ri(n as i64 - i)));
        }
    }
    Ok(f)
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuarticCritical {
    pub g_c: BigRational,
    /// Exponent of the singular part `(g_c - g)^{5/2}` of the planar free energy.
    pub singular_exponent: BigRational,
    /// `f_{0,n}` for `n = 1 ..= order`.
    pub coefficients: Vec<BigRational>,
}

impl QuarticCritical {
    /// `f_{0,n+1} / f_{0,n}`, expected to approach `1/g_c = 12`.
    pub fn ratios(&self) -> Vec<f64> {
        self.coefficients
            .windows(2)
            .map(|w| crate::algebra::rational_to_f64(&(&w[1] / &w[0])))
            .collect()
    }
}

pub fn quartic_critical(order: u32) -> Result<QuarticCritical> {
    let f0 = planar_free_energy(&EvenPotential::quartic(), order)?;
    Ok(QuarticCritical {
        g_c: BigRational::new(BigInt::one(), BigInt::from(12)),
        singular_exponent: BigRational::new(BigInt::from(5), BigInt::from(2)),
        coefficients: (1..=order).map(|k| f0.coeff(&[k])).collect(),
    })
}

/// Coefficients of a single-coupling series as a list indexed by degree.
pub fn univariate_coeffs(s: &CouplingSeries) -> Vec<BigRational> {
    (0..=s.order()).map(|k| s.coeff(&[k])).collect()
}

pub fn is_zero_series(s: &CouplingSeries) -> bool {
    s.terms().all(|(_, c)| c.is_zero())
}
