//! Meander and semi-meander polynomials.
//!
//! A meander of order `2n` is a pair of arch configurations glued along a river;
//! a semi-meander of order `n` is an arch configuration glued to the rainbow.
//! Counts are graded by the number of connected components `k` and, for
//! semi-meanders, by the winding `w` of the river around its source.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::algebra::{LaurentPoly, QPolynomial};
use crate::arch::{catalan, count_loops, enumerate_arches, rainbow, ArchConfig};
use crate::error::{Error, Result};
use crate::limits::WorkLimit;
use crate::wick::{for_each_pairing, pairing_count, single_star_genus};

/// Counts indexed by the number of connected components.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ComponentPolynomial {
    coeffs: BTreeMap<usize, BigUint>,
}

impl ComponentPolynomial {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, k: usize, count: &BigUint) {
        if count.is_zero() {
            return;
        }
        *self.coeffs.entry(k).or_default() += count;
    }

    pub fn coeff(&self, k: usize) -> BigUint {
        self.coeffs.get(&k).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &BTreeMap<usize, BigUint> {
        &self.coeffs
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Value at `q = 1`.
    pub fn total(&self) -> BigUint {
        self.coeffs.values().sum()
    }

    pub fn eval(&self, q: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .map(|(&k, c)| BigInt::from(c.clone()) * q.pow(k as u32))
            .sum()
    }

    pub fn to_qpoly(&self) -> QPolynomial {
        LaurentPoly::from_terms(
            self.coeffs
                .iter()
                .map(|(&k, c)| (k as i64, num_rational::BigRational::from_integer(BigInt::from(c.clone())))),
        )
    }

    fn merge(mut self, other: Self) -> Self {
        for (k, c) in other.coeffs {
            self.add(k, &c);
        }
        self
    }

    fn from_counts(counts: &[u64]) -> Self {
        let mut p = Self::new();
        for (k, &c) in counts.iter().enumerate() {
            p.add(k, &BigUint::from(c));
        }
        p
    }
}

fn all_arches(n: usize, limit: &WorkLimit, what: &str, work: u128) -> Result<Vec<ArchConfig>> {
    limit.check(what, work)?;
    Ok(enumerate_arches(n)?.collect())
}

/// `Σ_{a,b} q^{c(a,b)}` over all pairs of arch configurations of order `2n`.
pub fn meander_polynomial(n: usize, limit: &WorkLimit) -> Result<ComponentPolynomial> {
    if n == 0 {
        return Err(Error::InvalidInput("meander order needs n >= 1".into()));
    }
    let c = catalan(n as u64).to_u128().unwrap_or(u128::MAX);
    let arches = all_arches(n, limit, "meander arch pairs", c.saturating_mul(c))?;
    let counts = arches
        .par_iter()
        .map(|a| {
            let mut counts = vec![0u64; n + 1];
            for b in &arches {
                counts[count_loops(a.raw(), b.raw())] += 1;
            }
            counts
        })
        .reduce(|| vec![0u64; n + 1], |x, y| x.iter().zip(&y).map(|(a, b)| a + b).collect());
    Ok(ComponentPolynomial::from_counts(&counts))
}

/// `Σ_a q^{c(a, rainbow)}` over arch configurations of order `2n`.
pub fn semimeander_polynomial(n: usize, limit: &WorkLimit) -> Result<ComponentPolynomial> {
    if n == 0 {
        return Err(Error::InvalidInput("semi-meander order needs n >= 1".into()));
    }
    let c = catalan(n as u64).to_u128().unwrap_or(u128::MAX);
    let arches = all_arches(n, limit, "semi-meander arch configurations", c)?;
    let r = rainbow(n)?;
    let counts = arches
        .par_iter()
        .fold(
            || vec![0u64; n + 1],
            |mut acc, a| {
                acc[count_loops(a.raw(), r.raw())] += 1;
                acc
            },
        )
        .reduce(|| vec![0u64; n + 1], |x, y| x.iter().zip(&y).map(|(a, b)| a + b).collect());
    Ok(ComponentPolynomial::from_counts(&counts))
}

/// Semi-meander counts by order `n`, components `k` and winding `w`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SemiMeanderTable {
    n_max: usize,
    counts: BTreeMap<(usize, usize, usize), u64>,
}

impl SemiMeanderTable {
    /// Largest order for which the table is complete.
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn count(&self, n: usize, k: usize, w: usize) -> u64 {
        self.counts.get(&(n, k, w)).copied().unwrap_or(0)
    }

    /// Rows `(n, k, w, count)` with nonzero count, sorted.
    pub fn rows(&self) -> impl Iterator<Item = (usize, usize, usize, u64)> + '_ {
        self.counts.iter().map(|(&(n, k, w), &c)| (n, k, w, c))
    }

    /// Number of semi-meanders of order `n` with `k` components, summed over winding.
    pub fn by_components(&self, n: usize, k: usize) -> u64 {
        self.counts.range((n, k, 0)..=(n, k, usize::MAX)).map(|(_, &c)| c).sum()
    }

    pub fn polynomial(&self, n: usize) -> ComponentPolynomial {
        let mut counts = vec![0u64; n + 1];
        for (&(m, k, _), &c) in &self.counts {
            if m == n {
                counts[k] += c;
            }
        }
        ComponentPolynomial::from_counts(&counts)
    }

    pub fn total(&self, n: usize) -> u64 {
        self.counts.range((n, 0, 0)..=(n, usize::MAX, usize::MAX)).map(|(_, &c)| c).sum()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,k,w,count\n");
        for (n, k, w, c) in self.rows() {
            writeln!(s, "{n},{k},{w},{c}").expect("write to string");
        }
        s
    }
}

/// Per-worker counts indexed by `[n][k][w]`, flattened.
struct Accumulator {
    n_max: usize,
    counts: Vec<u64>,
}

impl Accumulator {
    fn new(n_max: usize) -> Self {
        let side = n_max + 1;
        Self {
            n_max,
            counts: vec![0; side * side * side],
        }
    }

    #[inline]
    fn record(&mut self, n: usize, k: usize, w: usize) {
        let side = self.n_max + 1;
        self.counts[(n * side + k) * side + w] += 1;
    }

    fn merge(mut self, other: Self) -> Self {
        for (a, b) in self.counts.iter_mut().zip(other.counts) {
            *a += b;
        }
        self
    }

    fn into_table(self, n_max: usize) -> SemiMeanderTable {
        let side = self.n_max + 1;
        let mut counts = BTreeMap::new();
        for n in 1..=n_max {
            for k in 1..=n {
                for w in 0..=n {
                    let c = self.counts[(n * side + k) * side + w];
                    if c > 0 {
                        counts.insert((n, k, w), c);
                    }
                }
            }
        }
        SemiMeanderTable { n_max, counts }
    }
}

/// A node of the semi-meander tree: an arch configuration of order `2n`
/// with its component count and winding.
#[derive(Clone)]
struct Node {
    partner: Vec<u16>,
    k: usize,
    w: usize,
}

/// Children of a node: one per external arch (same components) and the
/// configuration surrounded by a new outer arch (one more component).
fn for_each_child(partner: &[u16], k: usize, w: usize, child: &mut Vec<u16>, mut f: impl FnMut(&[u16], usize, usize)) {
    let len = partner.len();
    let n = len / 2;
    let shifted = |child: &mut Vec<u16>| {
        child.clear();
        child.push(0);
        child.extend(partner.iter().map(|&j| j + 1));
        child.push(0);
    };
    let mut i = 0;
    while i < len {
        let j = partner[i] as usize;
        shifted(child);
        child[0] = (i + 1) as u16;
        child[i + 1] = 0;
        child[j + 1] = (len + 1) as u16;
        child[len + 1] = (j + 1) as u16;
        let cw = if i < n && j >= n { w - 1 } else { w + 1 };
        f(child, k, cw);
        i = j + 1;
    }
    shifted(child);
    child[0] = (len + 1) as u16;
    child[len + 1] = 0;
    f(child, k + 1, w + 1);
}

fn dfs(partner: &[u16], k: usize, w: usize, depth: usize, n_max: usize, acc: &mut Accumulator, scratch: &mut [Vec<u16>]) {
    acc.record(depth, k, w);
    if depth == n_max {
        return;
    }
    let (buf, rest) = scratch.split_first_mut().expect("scratch sized to depth");
    for_each_child(partner, k, w, buf, |c, ck, cw| dfs(c, ck, cw, depth + 1, n_max, acc, rest));
}

/// Number of tree nodes visited when building the table up to `n_max`.
pub fn semimeander_tree_work(n_max: usize) -> u128 {
    (1..=n_max as u64)
        .map(|n| catalan(n).to_u128().unwrap_or(u128::MAX))
        .fold(0u128, u128::saturating_add)
}

/// Depth at which the tree is cut into independent subtrees.
const SHARD_DEPTH: usize = 8;

fn build_table(n_max: usize) -> SemiMeanderTable {
    let root = Node {
        partner: vec![1, 0],
        k: 1,
        w: 1,
    };
    let cut = SHARD_DEPTH.min(n_max);
    // Breadth-first down to the cut, recording the shallow levels directly.
    let mut acc = Accumulator::new(n_max);
    let mut frontier = vec![root];
    let mut buf = Vec::new();
    for depth in 1..cut {
        let mut next = Vec::new();
        for node in &frontier {
            acc.record(depth, node.k, node.w);
            for_each_child(&node.partner, node.k, node.w, &mut buf, |c, k, w| {
                next.push(Node {
                    partner: c.to_vec(),
                    k,
                    w,
                })
            });
        }
        frontier = next;
    }
    let deep = frontier
        .par_iter()
        .fold(
            || Accumulator::new(n_max),
            |mut acc, node| {
                let mut scratch = vec![Vec::with_capacity(2 * n_max + 2); n_max + 1];
                dfs(&node.partner, node.k, node.w, cut, n_max, &mut acc, &mut scratch);
                acc
            },
        )
        .reduce(|| Accumulator::new(n_max), Accumulator::merge);
    acc.merge(deep).into_table(n_max)
}

/// Semi-meander counts for all orders up to `n_max` by depth-first traversal of
/// the semi-meander tree. If the full traversal exceeds the work limit, the
/// table for the largest affordable order is returned with the error.
pub fn semimeander_table_partial(n_max: usize, limit: &WorkLimit) -> (SemiMeanderTable, Option<Error>) {
    if n_max == 0 {
        return (
            SemiMeanderTable::default(),
            Some(Error::InvalidInput("semi-meander table needs n_max >= 1".into())),
        );
    }
    let needed = semimeander_tree_work(n_max);
    if limit.allows(needed) {
        return (build_table(n_max), None);
    }
    let err = limit.check("semi-meander tree nodes", needed).unwrap_err();
    let reachable = (1..n_max).rev().find(|&m| limit.allows(semimeander_tree_work(m)));
    match reachable {
        Some(m) => (build_table(m), Some(err)),
        None => (SemiMeanderTable::default(), Some(err)),
    }
}

pub fn semimeander_table(n_max: usize, limit: &WorkLimit) -> Result<SemiMeanderTable> {
    match semimeander_table_partial(n_max, limit) {
        (t, None) => Ok(t),
        (_, Some(e)) => Err(e),
    }
}

/// All perfect pairings of `0..2n`, each with its genus as a single star.
fn pairings_with_genus(n: usize) -> Vec<(Vec<u16>, usize)> {
    let mut out = Vec::new();
    for_each_pairing(2 * n, &|_, _| true, &mut |p| {
        out.push((p.iter().map(|&j| j as u16).collect(), single_star_genus(p)));
    });
    out
}

/// Meanders of genus exactly `g`: pairs of arbitrary pairings of the `2n` upper
/// and `2n` lower half-edges, with genus the sum of the genera of the two sides
/// seen as stars, counted by number of loops.
pub fn genus_meander_polynomial(n: usize, g: usize, limit: &WorkLimit) -> Result<ComponentPolynomial> {
    if n == 0 {
        return Err(Error::InvalidInput("meander order needs n >= 1".into()));
    }
    let p = pairing_count(2 * n);
    limit.check("genus meander pairing pairs", p.saturating_mul(p))?;
    let all = pairings_with_genus(n);
    let counts = all
        .par_iter()
        .filter(|(_, gu)| *gu <= g)
        .map(|(up, gu)| {
            let mut counts = vec![0u64; n + 1];
            for (down, gd) in &all {
                if gu + gd == g {
                    counts[count_loops(up, down)] += 1;
                }
            }
            counts
        })
        .reduce(|| vec![0u64; n + 1], |x, y| x.iter().zip(&y).map(|(a, b)| a + b).collect());
    Ok(ComponentPolynomial::from_counts(&counts))
}

/// Genus-resolved meander polynomials for all genera at order `2n`.
pub fn genus_meander_polynomials(n: usize, limit: &WorkLimit) -> Result<BTreeMap<usize, ComponentPolynomial>> {
    let p = pairing_count(2 * n);
    limit.check("genus meander pairing pairs", p.saturating_mul(p))?;
    let all = pairings_with_genus(n);
    let merged = all
        .par_iter()
        .map(|(up, gu)| {
            let mut m: BTreeMap<usize, ComponentPolynomial> = BTreeMap::new();
            for (down, gd) in &all {
                m.entry(gu + gd).or_default().add(count_loops(up, down), &BigUint::one());
            }
            m
        })
        .reduce(BTreeMap::new, |mut x, y| {
            for (g, p) in y {
                let cur = x.remove(&g).unwrap_or_default();
                x.insert(g, cur.merge(p));
            }
            x
        });
    Ok(merged)
}

/// Genus-resolved semi-meanders: a pairing of `2n` half-edges on a star, closed
/// by the mirror image of the river, counted by genus and loops.
pub fn genus_semimeander_polynomials(n: usize, limit: &WorkLimit) -> Result<BTreeMap<usize, ComponentPolynomial>> {
    if n == 0 {
        return Err(Error::InvalidInput("semi-meander order needs n >= 1".into()));
    }
    limit.check("genus semi-meander pairings", pairing_count(2 * n))?;
    let r = rainbow(n)?;
    let mut out: BTreeMap<usize, ComponentPolynomial> = BTreeMap::new();
    for (p, g) in pairings_with_genus(n) {
        out.entry(g).or_default().add(count_loops(&p, r.raw()), &BigUint::one());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arch::{glue_components, winding};

    fn lim() -> WorkLimit {
        WorkLimit::default()
    }

    fn poly(pairs: &[(usize, u64)]) -> ComponentPolynomial {
        let mut p = ComponentPolynomial::new();
        for &(k, c) in pairs {
            p.add(k, &BigUint::from(c));
        }
        p
    }

    #[test]
    fn meander_small_orders() {
        assert_eq!(meander_polynomial(1, &lim()).unwrap(), poly(&[(1, 1)]));
        assert_eq!(meander_polynomial(2, &lim()).unwrap(), poly(&[(1, 2), (2, 2)]));
        assert_eq!(meander_polynomial(8, &lim()).unwrap().total(), BigUint::from(2_044_900u32));
    }

    #[test]
    fn meander_top_coefficient_is_catalan() {
        for n in 1..=6 {
            let p = meander_polynomial(n, &lim()).unwrap();
            assert_eq!(p.coeff(n), catalan(n as u64));
        }
    }

    #[test]
    fn semimeander_small_orders() {
        assert_eq!(semimeander_polynomial(2, &lim()).unwrap(), poly(&[(1, 1), (2, 1)]));
        assert_eq!(semimeander_polynomial(3, &lim()).unwrap().coeff(1), BigUint::from(2u32));
        assert_eq!(semimeander_polynomial(10, &lim()).unwrap().coeff(1), BigUint::from(1406u32));
    }

    #[test]
    fn table_matches_direct_polynomial() {
        let t = semimeander_table(12, &lim()).unwrap();
        for n in 1..=12 {
            assert_eq!(t.polynomial(n), semimeander_polynomial(n, &lim()).unwrap(), "order {n}");
            assert_eq!(BigUint::from(t.total(n)), catalan(n as u64));
        }
        assert_eq!(t.by_components(6, 1), 24);
    }

    #[test]
    fn table_extremes() {
        let t = semimeander_table(14, &lim()).unwrap();
        for n in 2..=14 {
            assert_eq!(t.by_components(n, n), 1);
            assert_eq!(t.count(n, n, n), 1);
            assert_eq!(t.by_components(n, n - 1), (n - 1) as u64);
        }
        assert_eq!(t.by_components(14, 1), 111_278);
    }

    #[test]
    fn tree_winding_matches_recomputation() {
        // Winding and components carried through the tree agree with direct
        // computation on every node up to order 10.
        let r = |n| rainbow(n).unwrap();
        let mut level = vec![Node {
            partner: vec![1, 0],
            k: 1,
            w: 1,
        }];
        let mut buf = Vec::new();
        for n in 1..=10usize {
            let rb = r(n);
            for node in &level {
                let a = ArchConfig::new(node.partner.iter().map(|&j| j as usize).collect()).unwrap();
                assert_eq!(winding(&a), node.w);
                assert_eq!(glue_components(&a, &rb).unwrap(), node.k);
            }
            let mut next = Vec::new();
            for node in &level {
                for_each_child(&node.partner, node.k, node.w, &mut buf, |c, k, w| {
                    next.push(Node { partner: c.to_vec(), k, w })
                });
            }
            level = next;
        }
    }

    #[test]
    fn work_limit_keeps_partial_table() {
        let limit = WorkLimit::new(semimeander_tree_work(7) as u64).unwrap();
        let (t, err) = semimeander_table_partial(9, &limit);
        assert!(err.unwrap().is_resource_limit());
        assert_eq!(t.n_max(), 7);
        assert_eq!(t.by_components(7, 1), 66);
        assert!(meander_polynomial(9, &WorkLimit::new(1000).unwrap()).unwrap_err().is_resource_limit());
    }

    #[test]
    fn csv_layout() {
        let t = semimeander_table(2, &lim()).unwrap();
        assert_eq!(t.to_csv(), "n,k,w,count\n1,1,1,1\n2,1,0,1\n2,2,2,1\n");
    }

    #[test]
    fn genus_meanders_order_one_and_two() {
        assert_eq!(genus_meander_polynomial(1, 0, &lim()).unwrap(), poly(&[(1, 1)]));
        assert!(genus_meander_polynomial(1, 1, &lim()).unwrap().is_empty());
        assert_eq!(genus_meander_polynomial(2, 0, &lim()).unwrap(), meander_polynomial(2, &lim()).unwrap());
        assert_eq!(genus_meander_polynomial(2, 1, &lim()).unwrap(), poly(&[(1, 4)]));
        assert_eq!(genus_meander_polynomial(2, 2, &lim()).unwrap(), poly(&[(2, 1)]));
    }

    #[test]
    fn genus_zero_is_planar_meander() {
        for n in 1..=4 {
            assert_eq!(genus_meander_polynomial(n, 0, &lim()).unwrap(), meander_polynomial(n, &lim()).unwrap());
        }
    }

    #[test]
    fn genus_meanders_sum_to_all_pairs() {
        for n in 1..=3usize {
            let all = genus_meander_polynomials(n, &lim()).unwrap();
            let total: BigUint = all.values().map(ComponentPolynomial::total).sum();
            let p = pairing_count(2 * n);
            assert_eq!(total, BigUint::from(p * p));
        }
    }

    #[test]
    fn genus_semimeanders_planar_part() {
        for n in 1..=5 {
            let all = genus_semimeander_polynomials(n, &lim()).unwrap();
            assert_eq!(all[&0], semimeander_polynomial(n, &lim()).unwrap());
        }
    }
}
