//! Vertex-tricoloured triangulations through the discrete Hirota equation.
//!
//! `Z_n(a, b)` is a truncated series in `s = t/N`. The recursion
//! `n s Z_{n+1}(a+1, b+1) Z_{n-1}(a, b) = Z_n(a+1, b+1) Z_n(a, b) - Z_n(a, b+1) Z_n(a+1, b)`
//! is run as an initial-value problem from `Z_0 = 1` and the closed form of `Z_1`.
//! The coefficients of `log Z_n(a, b)` are the polynomials `ω_m(a, b, n)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::algebra::{factorial, rising};
use crate::error::{Error, Result};
use crate::series::PowerSeries;

/// Truncated series in `s = t/N`.
pub type TSeries = PowerSeries;

fn ri(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn fact(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(factorial(n)))
}

/// `Z_1(a, b) = Σ_k s^k (a)_k (b)_k / k!`.
pub fn z1_series(a: &BigRational, b: &BigRational, order: usize) -> TSeries {
    let coeffs = (0..=order as u64)
        .map(|k| rising(a, k) * rising(b, k) / fact(k))
        .collect();
    PowerSeries::new(coeffs, order)
}

/// `Z_n(a0 + i, b0 + j)` for `n = 0 ..= n_max`.
///
/// `Z_n` is stored for `n - 1 <= i, j <= extent` (every index for `n = 0`), so the
/// usable square shrinks by one row and column per step.
#[derive(Clone, Debug)]
pub struct GridSeries {
    a0: BigRational,
    b0: BigRational,
    extent: usize,
    n_max: usize,
    order: usize,
    values: HashMap<(usize, usize, usize), TSeries>,
}

impl GridSeries {
    pub fn a0(&self) -> &BigRational {
        &self.a0
    }

    pub fn b0(&self) -> &BigRational {
        &self.b0
    }

    pub fn extent(&self) -> usize {
        self.extent
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `Z_n(a0 + i, b0 + j)`, if inside the computed region.
    pub fn get(&self, n: usize, i: usize, j: usize) -> Option<&TSeries> {
        self.values.get(&(n, i, j))
    }

    /// `F_n = log Z_n` at a grid point.
    pub fn free_energy(&self, n: usize, i: usize, j: usize) -> Option<TSeries> {
        self.get(n, i, j).map(|z| z.log().expect("constant term is 1"))
    }
}

fn lowest(n: usize) -> usize {
    n.saturating_sub(1)
}

/// Runs the Hirota recursion on the square `0 ..= extent` of offsets.
pub fn hirota_grid(
    a0: &BigRational,
    b0: &BigRational,
    extent: usize,
    n_max: usize,
    order: usize,
) -> Result<GridSeries> {
    if n_max > extent + 1 {
        return Err(Error::InvalidInput(format!(
            "grid extent {extent} too small for n_max = {n_max}"
        )));
    }
    // Each step divides by s and so loses one order.
    let work_order = order + n_max;
    let mut values: HashMap<(usize, usize, usize), TSeries> = HashMap::new();
    for i in 0..=extent {
        for j in 0..=extent {
            values.insert((0, i, j), PowerSeries::one(work_order));
            if n_max >= 1 {
                let a = a0 + ri(i as i64);
                let b = b0 + ri(j as i64);
                values.insert((1, i, j), z1_series(&a, &b, work_order));
            }
        }
    }
    for n in 1..n_max {
        let lo = lowest(n + 1);
        let points: Vec<(usize, usize)> = (lo..=extent).flat_map(|i| (lo..=extent).map(move |j| (i, j))).collect();
        let next: Vec<((usize, usize), TSeries)> = points
            .par_iter()
            .map(|&(i, j)| -> Result<((usize, usize), TSeries)> {
                let z = |m: usize, x: usize, y: usize| &values[&(m, x, y)];
                let num = &(z(n, i, j) * z(n, i - 1, j - 1)) - &(z(n, i - 1, j) * z(n, i, j - 1));
                if !num.coeff(0).is_zero() {
                    return Err(Error::Consistency(format!(
                        "Hirota numerator at n = {n}, offset ({i}, {j}) has constant term {}",
                        num.coeff(0)
                    )));
                }
                let quotient = num.shift_down(1)?.scale(&ri(n as i64).recip());
                let z = quotient.div(z(n - 1, i - 1, j - 1))?;
                Ok(((i, j), z))
            })
            .collect::<Result<_>>()?;
        for ((i, j), z) in next {
            values.insert((n + 1, i, j), z);
        }
    }
    let values = values
        .into_iter()
        .map(|(k, v)| (k, v.truncate(order)))
        .collect();
    Ok(GridSeries {
        a0: a0.clone(),
        b0: b0.clone(),
        extent,
        n_max,
        order,
        values,
    })
}

/// `Z_n(a, b)` from the recursion, started far enough below `(a, b)`.
pub fn z_series(n: usize, a: &BigRational, b: &BigRational, order: usize) -> Result<TSeries> {
    if n == 0 {
        return Ok(PowerSeries::one(order));
    }
    let shift = ri(n as i64 - 1);
    let g = hirota_grid(&(a - &shift), &(b - &shift), n - 1, n, order)?;
    Ok(g.get(n, n - 1, n - 1).expect("corner is computed").clone())
}

/// `Γ(x + d) / Γ(x)` as a finite product; `None` at a pole.
fn gamma_ratio(x: &BigRational, d: i64) -> Option<BigRational> {
    if d >= 0 {
        return Some(rising(x, d as u64));
    }
    let lower = x + ri(d);
    let den = rising(&lower, (-d) as u64);
    (!den.is_zero()).then(|| den.recip())
}

/// Direct expansion of `Z_n(a, b)` as a sum over distinct non-negative integers
/// `k_1 < ... < k_n`, weighted by the squared Vandermonde determinant.
pub fn zndetf_oracle(n: usize, a: &BigRational, b: &BigRational, order: usize) -> Result<TSeries> {
    if n == 0 {
        return Ok(PowerSeries::one(order));
    }
    let base = (n * (n - 1) / 2) as u64;
    let mut prefactor = fact(n as u64);
    for i in 1..=n as u64 {
        prefactor /= fact(i);
    }
    let mut coeffs = vec![BigRational::zero(); order + 1];
    let mut ks: Vec<u64> = Vec::with_capacity(n);
    let max_k = base + order as u64;
    let mut err = None;
    visit_increasing(&mut ks, n, 0, max_k, base + order as u64, &mut |ks| {
        let excess = (ks.iter().sum::<u64>() - base) as usize;
        let mut term = prefactor.clone();
        for x in 0..n {
            for y in x + 1..n {
                let d = ri(ks[y] as i64 - ks[x] as i64);
                term *= &d * &d;
            }
        }
        for (idx, &k) in ks.iter().enumerate() {
            let i = idx as i64 + 1;
            let d = k as i64 + i - n as i64;
            let ga = gamma_ratio(&(a + ri(1 - i)), d);
            let gb = gamma_ratio(&(b + ri(1 - i)), d);
            match (ga, gb) {
                (Some(x), Some(y)) => term = term * x * y / fact(k),
                _ => {
                    err.get_or_insert_with(|| {
                        Error::Domain(format!("gamma-function pole at a = {a}, b = {b}, n = {n}"))
                    });
                    return;
                }
            }
        }
        coeffs[excess] += term;
    });
    match err {
        Some(e) => Err(e),
        None => Ok(PowerSeries::new(coeffs, order)),
    }
}

fn visit_increasing(ks: &mut Vec<u64>, n: usize, start: u64, max_k: u64, budget: u64, f: &mut dyn FnMut(&[u64])) {
    if ks.len() == n {
        f(ks);
        return;
    }
    let remaining = (n - ks.len()) as u64;
    let used: u64 = ks.iter().sum();
    for k in start..=max_k {
        // The smallest completion is k, k+1, ..., k+remaining-1.
        let min_rest = remaining * k + remaining * (remaining - 1) / 2;
        if used + min_rest > budget {
            break;
        }
        ks.push(k);
        visit_increasing(ks, n, k + 1, max_k, budget, f);
        ks.pop();
    }
}

/// Polynomial in `(a, b, n)` with exact coefficients, keyed by exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaPolynomial {
    pub m: usize,
    pub coeffs: BTreeMap<(u32, u32, u32), BigRational>,
}

impl OmegaPolynomial {
    pub fn eval(&self, a: &BigRational, b: &BigRational, n: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .map(|(&(i, j, k), c)| {
                c * num_traits::pow(a.clone(), i as usize)
                    * num_traits::pow(b.clone(), j as usize)
                    * num_traits::pow(n.clone(), k as usize)
            })
            .sum()
    }

    pub fn total_degree(&self) -> u32 {
        self.coeffs.keys().map(|&(i, j, k)| i + j + k).max().unwrap_or(0)
    }

    pub fn max_variable_degree(&self) -> u32 {
        self.coeffs.keys().map(|&(i, j, k)| i.max(j).max(k)).max().unwrap_or(0)
    }

    pub fn divisible_by_abn(&self) -> bool {
        self.coeffs.keys().all(|&(i, j, k)| i >= 1 && j >= 1 && k >= 1)
    }

    /// Exponents permuted by `perm`, where `perm[v]` is the new slot of variable `v`.
    pub fn permuted(&self, perm: [usize; 3]) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(&(i, j, k), c)| {
                let mut e = [0u32; 3];
                e[perm[0]] = i;
                e[perm[1]] = j;
                e[perm[2]] = k;
                ((e[0], e[1], e[2]), c.clone())
            })
            .collect();
        Self { m: self.m, coeffs }
    }

    pub fn is_fully_symmetric(&self) -> bool {
        [[1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]]
            .iter()
            .all(|&p| self.permuted(p) == *self)
    }

    /// Homogeneous part of the given total degree.
    pub fn homogeneous_part(&self, degree: u32) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(&(i, j, k), _)| i + j + k == degree)
            .map(|(e, c)| (*e, c.clone()))
            .collect();
        Self { m: self.m, coeffs }
    }

    /// Coefficients of `ω_m / (abn)`.
    pub fn quotient_by_abn(&self) -> Option<Self> {
        if !self.divisible_by_abn() {
            return None;
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|(&(i, j, k), c)| ((i - 1, j - 1, k - 1), c.clone()))
            .collect();
        Some(Self { m: self.m, coeffs })
    }
}

/// Monomials by decreasing total degree, then lexicographically decreasing in
/// `(n, a, b)`.
impl fmt::Display for OmegaPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<(&(u32, u32, u32), &BigRational)> = self.coeffs.iter().collect();
        terms.sort_by(|(x, _), (y, _)| {
            let key = |e: &(u32, u32, u32)| (e.0 + e.1 + e.2, e.2, e.0, e.1);
            key(y).cmp(&key(x))
        });
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (&(i, j, k), c)) in terms.iter().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if idx == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let mag = c.abs();
            let mut parts = Vec::new();
            if !mag.is_one() || (i, j, k) == (0, 0, 0) {
                parts.push(mag.to_string());
            }
            for (v, e) in [("n", k), ("a", i), ("b", j)] {
                match e {
                    0 => {}
                    1 => parts.push(v.to_string()),
                    _ => parts.push(format!("{v}^{e}")),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

/// Monomial coefficients of the polynomial through `(x, values[x])`, `x = 0, 1, ...`.
fn interpolate_1d(values: &[BigRational]) -> Vec<BigRational> {
    let d = values.len();
    let mut dd = values.to_vec();
    for level in 1..d {
        for x in (level..d).rev() {
            dd[x] = (&dd[x] - &dd[x - 1]) / ri(level as i64);
        }
    }
    // Newton form with nodes 0, 1, ..., expanded by Horner steps.
    let mut poly = vec![BigRational::zero(); d];
    for x in (0..d).rev() {
        let mut next = vec![BigRational::zero(); d];
        for (p, c) in poly.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if p + 1 < d {
                next[p + 1] += c;
            }
            next[p] -= c * ri(x as i64);
        }
        next[0] += &dd[x];
        poly = next;
    }
    poly
}

/// Values of `[s^m] F_n(a, b)` for `a, b, n` in `0 ..= nodes` (inclusive).
struct OmegaTable {
    nodes: usize,
    /// `data[m - 1][a][b][n]`.
    data: Vec<Vec<Vec<Vec<BigRational>>>>,
}

fn omega_table(m_max: usize, nodes: usize) -> Result<OmegaTable> {
    let shift = nodes.saturating_sub(1);
    let start = -ri(shift as i64);
    let extent = shift + nodes;
    let g = hirota_grid(&start, &start, extent, nodes, m_max)?;
    let mut data = vec![vec![vec![vec![BigRational::zero(); nodes + 1]; nodes + 1]; nodes + 1]; m_max];
    for n in 0..=nodes {
        for a in 0..=nodes {
            for b in 0..=nodes {
                let f = g.free_energy(n, a + shift, b + shift).ok_or_else(|| {
                    Error::Consistency(format!("missing grid value at n = {n}, a = {a}, b = {b}"))
                })?;
                for m in 1..=m_max {
                    data[m - 1][a][b][n] = f.coeff(m).clone();
                }
            }
        }
    }
    Ok(OmegaTable { nodes, data })
}

fn interpolate_3d(values: &[Vec<Vec<BigRational>>], deg: usize) -> BTreeMap<(u32, u32, u32), BigRational> {
    let d = deg + 1;
    // Along n, then b, then a.
    let mut stage = vec![vec![vec![BigRational::zero(); d]; d]; d];
    for a in 0..d {
        for b in 0..d {
            stage[a][b] = interpolate_1d(&values[a][b][..d]);
        }
    }
    for a in 0..d {
        for k in 0..d {
            let col: Vec<BigRational> = (0..d).map(|b| stage[a][b][k].clone()).collect();
            for (j, c) in interpolate_1d(&col).into_iter().enumerate() {
                stage[a][j][k] = c;
            }
        }
    }
    let mut out = BTreeMap::new();
    for j in 0..d {
        for k in 0..d {
            let col: Vec<BigRational> = (0..d).map(|a| stage[a][j][k].clone()).collect();
            for (i, c) in interpolate_1d(&col).into_iter().enumerate() {
                if !c.is_zero() {
                    out.insert((i as u32, j as u32, k as u32), c);
                }
            }
        }
    }
    out
}

/// Outcome of the interpolation of one `ω_m`.
#[derive(Clone, Debug, PartialEq)]
pub struct OmegaFit {
    pub polynomial: OmegaPolynomial,
    /// Per-variable degree bound actually used.
    pub degree_bound: usize,
    /// Set when the bound `m` failed the check and had to be raised.
    pub bound_raised: bool,
}

/// Reconstructs `ω_1 ..= ω_{m_max}` by interpolating `log Z_n(a, b)` on integer
/// nodes and checking the result on the spare nodes.
pub fn omega_polynomials_detailed(m_max: usize) -> Result<Vec<OmegaFit>> {
    if m_max == 0 {
        return Err(Error::InvalidInput("m_max must be at least 1".into()));
    }
    let spare = 2;
    let mut nodes = m_max + spare;
    let mut table = omega_table(m_max, nodes)?;
    let mut out = Vec::with_capacity(m_max);
    for m in 1..=m_max {
        let mut deg = m;
        loop {
            if deg + spare > table.nodes {
                nodes = deg + spare;
                table = omega_table(m_max, nodes)?;
            }
            let values = &table.data[m - 1];
            let coeffs = interpolate_3d(values, deg);
            let poly = OmegaPolynomial { m, coeffs };
            let consistent = (0..=table.nodes).all(|a| {
                (0..=table.nodes).all(|b| {
                    (0..=table.nodes).all(|n| poly.eval(&ri(a as i64), &ri(b as i64), &ri(n as i64)) == values[a][b][n])
                })
            });
            if consistent {
                out.push(OmegaFit {
                    polynomial: poly,
                    degree_bound: deg,
                    bound_raised: deg > m,
                });
                break;
            }
            if deg > 4 * m + 4 {
                return Err(Error::Consistency(format!("ω_{m} is not a polynomial of per-variable degree ≤ {deg}")));
            }
            deg += 1;
        }
    }
    Ok(out)
}

pub fn omega_polynomials(m_max: usize) -> Result<Vec<OmegaPolynomial>> {
    Ok(omega_polynomials_detailed(m_max)?.into_iter().map(|f| f.polynomial).collect())
}

/// Genus-zero solution: `F_i (1 - F_j - F_k) = t x_i` and
/// `(t ∂_t)² f_0 = F_1 F_2 F_3 / t²`.
#[derive(Clone, Debug, PartialEq)]
pub struct GenusZero {
    pub f: [PowerSeries; 3],
    pub f0: PowerSeries,
}

pub fn genus_zero_system(x: [&BigRational; 3], order: usize) -> Result<GenusZero> {
    let work = order + 2;
    let t = PowerSeries::var(work);
    let tx: Vec<PowerSeries> = x.iter().map(|&xi| t.scale(xi)).collect();
    let mut f = [tx[0].clone(), tx[1].clone(), tx[2].clone()];
    let one = PowerSeries::one(work);
    for _ in 0..=work {
        let next = [0usize, 1, 2].map(|i| {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            let denom = &(&one - &f[j]) - &f[k];
            tx[i].div(&denom).expect("constant term is 1")
        });
        if next == f {
            break;
        }
        f = next;
    }
    let product = &(&f[0] * &f[1]) * &f[2];
    let shifted = product.shift_down(2)?;
    let coeffs = (0..=order)
        .map(|m| {
            if m == 0 {
                BigRational::zero()
            } else {
                shifted.coeff(m) / ri((m * m) as i64)
            }
        })
        .collect();
    Ok(GenusZero {
        f: f.map(|s| s.truncate(order)),
        f0: PowerSeries::new(coeffs, order),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, rat};

    fn poly(terms: &[((u32, u32, u32), BigRational)]) -> OmegaPolynomial {
        OmegaPolynomial {
            m: 0,
            coeffs: terms.iter().cloned().collect(),
        }
    }

    #[test]
    fn z1_values() {
        let z = z1_series(&int(0), &rat(3, 7), 5);
        assert_eq!(z, PowerSeries::one(5));
        let z = z1_series(&int(1), &int(1), 6);
        for k in 0..=6u64 {
            assert_eq!(*z.coeff(k as usize), fact(k));
        }
        let a = rat(2, 5);
        let b = rat(-3, 4);
        let f = z1_series(&a, &b, 3).log().unwrap();
        assert_eq!(*f.coeff(1), &a * &b);
        assert_eq!(*f.coeff(2), &a * &b * (int(1) + &a + &b) / int(2));
    }

    #[test]
    fn one_dimensional_interpolation() {
        let vals: Vec<BigRational> = (0..5).map(|x| ri(3 * x * x * x - x + 7)).collect();
        let c = interpolate_1d(&vals);
        assert_eq!(c, vec![int(7), int(-1), int(0), int(3), int(0)]);
    }

    #[test]
    fn second_order_grid_value() {
        let z = z_series(2, &rat(1, 2), &rat(1, 3), 3).unwrap();
        assert_eq!(*z.coeff(1), int(2) * rat(1, 2) * rat(1, 3));
        let z = z_series(2, &int(3), &int(5), 2).unwrap();
        assert_eq!(*z.coeff(1), int(30));
    }

    #[test]
    fn vanishing_column() {
        let g = hirota_grid(&int(-2), &int(0), 4, 3, 4).unwrap();
        for n in 0..=3 {
            for i in lowest(n)..=4 {
                let z = g.get(n, i, 2).unwrap();
                assert_eq!(*z.coeff(0), int(1));
            }
        }
        // b0 = 0 column at n = 1.
        assert_eq!(*g.get(1, 3, 0).unwrap(), PowerSeries::one(4));
    }

    #[test]
    fn first_four_omegas() {
        let w = omega_polynomials(4).unwrap();
        let n_ab = |c: BigRational, a: u32, b: u32, n: u32| ((a + 1, b + 1, n + 1), c);
        let w1 = poly(&[n_ab(int(1), 0, 0, 0)]);
        let w2 = poly(&[n_ab(rat(1, 2), 0, 0, 1), n_ab(rat(1, 2), 1, 0, 0), n_ab(rat(1, 2), 0, 1, 0)]);
        let t = rat(1, 3);
        let w3 = poly(&[
            n_ab(t.clone(), 0, 0, 2),
            n_ab(int(1), 1, 0, 1),
            n_ab(int(1), 0, 1, 1),
            n_ab(t.clone(), 2, 0, 0),
            n_ab(int(1), 1, 1, 0),
            n_ab(t.clone(), 0, 2, 0),
            n_ab(t.clone(), 0, 0, 0),
        ]);
        let q = rat(1, 4);
        let w4 = poly(&[
            n_ab(q.clone(), 0, 0, 3),
            n_ab(rat(6, 4), 1, 0, 2),
            n_ab(rat(6, 4), 0, 1, 2),
            n_ab(rat(6, 4), 2, 0, 1),
            n_ab(rat(17, 4), 1, 1, 1),
            n_ab(rat(6, 4), 0, 2, 1),
            n_ab(rat(5, 4), 0, 0, 1),
            n_ab(q.clone(), 3, 0, 0),
            n_ab(rat(6, 4), 2, 1, 0),
            n_ab(rat(6, 4), 1, 2, 0),
            n_ab(q.clone(), 0, 3, 0),
            n_ab(rat(5, 4), 1, 0, 0),
            n_ab(rat(5, 4), 0, 1, 0),
        ]);
        for (got, want) in w.iter().zip([w1, w2, w3, w4]) {
            assert_eq!(got.coeffs, want.coeffs, "ω_{}", got.m);
        }
    }

    #[test]
    fn display_is_canonical() {
        let w = omega_polynomials(2).unwrap();
        assert_eq!(w[0].to_string(), "n*a*b");
        assert_eq!(w[1].to_string(), "1/2*n^2*a*b + 1/2*n*a^2*b + 1/2*n*a*b^2");
    }

    #[test]
    fn determinant_expansion_matches_recursion() {
        for (n, a, b) in [(1, rat(2, 3), rat(-5, 2)), (2, rat(1, 2), rat(1, 3)), (3, rat(7, 2), rat(5, 2))] {
            let direct = zndetf_oracle(n, &a, &b, 6).unwrap();
            let rec = z_series(n, &a, &b, 6).unwrap();
            assert_eq!(direct, rec, "n = {n}");
        }
        assert_eq!(zndetf_oracle(1, &rat(1, 2), &rat(1, 3), 5).unwrap(), z1_series(&rat(1, 2), &rat(1, 3), 5));
        assert!(matches!(zndetf_oracle(3, &int(1), &int(1), 3), Err(Error::Domain(_))));
    }

    #[test]
    fn tutte_check() {
        let z = rat(2, 3);
        let g = genus_zero_system([&z, &z, &z], 8).unwrap();
        let t = PowerSeries::var(8);
        for f in &g.f {
            let lhs = f * &(&PowerSeries::one(8) - &f.scale(&int(2)));
            assert_eq!(lhs, t.scale(&z));
        }
        let root = PowerSeries::new(vec![int(1), -int(8) * &z], 8).sqrt().unwrap();
        let closed = (&PowerSeries::one(8) - &root).scale(&rat(1, 4));
        assert_eq!(g.f[0], closed);
    }

    #[test]
    fn genus_zero_low_orders() {
        let (x1, x2, x3) = (rat(2, 1), rat(3, 5), rat(-1, 7));
        let g = genus_zero_system([&x1, &x2, &x3], 4).unwrap();
        let p = &x1 * &x2 * &x3;
        assert_eq!(*g.f0.coeff(1), p.clone());
        assert_eq!(*g.f0.coeff(2), &p * (&x1 + &x2 + &x3) / int(2));
    }

    #[test]
    fn wick_oracle_for_two_vertices() {
        use crate::algebra::LaurentN;
        use crate::limits::WorkLimit;
        use crate::wick::{connected_free_energy_general, PropagatorTable, VertexType};

        let w = omega_polynomials(3).unwrap();
        let p = PropagatorTable::new(vec![vec![int(0), int(1)], vec![int(1), int(0)]]).unwrap();
        for m in 1..=3usize {
            let types: Vec<VertexType> = [1usize, 2]
                .iter()
                .map(|&c| VertexType {
                    word: vec![c; m],
                    factor: rat(1, m as i64),
                    grade: 1,
                })
                .collect();
            let f = connected_free_energy_general(&types, &p, 2, &WorkLimit::default()).unwrap();
            let got = f.coeff(&[1, 1]);
            // [x1 x2 t^m] F = N^{2-m} [ab] ω_m(a, b, N).
            let mut want = LaurentN::zero();
            for (&(i, j, k), c) in &w[m - 1].coeffs {
                if (i, j) == (1, 1) {
                    want.add_term(k as i64 + 2 - m as i64, c.clone());
                }
            }
            assert_eq!(got, want, "m = {m}");
        }
    }
}
