//! Gaussian matrix averages at finite `N` as sums over pairings of star diagrams.
//!
//! A star is a trace word `Tr(M_{a_1} ... M_{a_p})`, drawn as a vertex with `p`
//! cyclically ordered half-edges. Pairing half-edges produces a fatgraph whose
//! weight is the product of propagators times `N^{F-E}`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{parse_rational, LaurentN};
use crate::error::{Error, Result};
use crate::limits::WorkLimit;
use crate::multiseries::MultiSeries;

/// A product of traces; each star is a word over matrix labels `1..=k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarSystem {
    pub stars: Vec<Vec<usize>>,
}

impl StarSystem {
    pub fn new(stars: Vec<Vec<usize>>) -> Self {
        Self { stars }
    }

    pub fn single(word: Vec<usize>) -> Self {
        Self { stars: vec![word] }
    }

    pub fn half_edges(&self) -> usize {
        self.stars.iter().map(Vec::len).sum()
    }

    /// Half-edge labels, star by star.
    fn labels(&self) -> Vec<usize> {
        self.stars.iter().flatten().copied().collect()
    }

    /// Star index and cyclic successor of every half-edge.
    fn rotation(&self) -> (Vec<usize>, Vec<usize>) {
        let mut owner = Vec::with_capacity(self.half_edges());
        let mut succ = Vec::with_capacity(self.half_edges());
        let mut offset = 0;
        for (s, star) in self.stars.iter().enumerate() {
            let len = star.len();
            for i in 0..len {
                owner.push(s);
                succ.push(offset + (i + 1) % len);
            }
            offset += len;
        }
        (owner, succ)
    }
}

/// Symmetric table of propagator weights between matrix labels.
#[derive(Clone, Debug, PartialEq)]
pub struct PropagatorTable {
    entries: Vec<Vec<BigRational>>,
}

#[derive(Serialize, Deserialize)]
struct PropagatorJson {
    entries: Vec<Vec<String>>,
}

impl PropagatorTable {
    pub fn new(entries: Vec<Vec<BigRational>>) -> Result<Self> {
        let k = entries.len();
        if k == 0 || entries.iter().any(|row| row.len() != k) {
            return Err(Error::Dimension("propagator table must be a nonempty square matrix".into()));
        }
        for a in 0..k {
            for b in 0..a {
                if entries[a][b] != entries[b][a] {
                    return Err(Error::InvalidInput(format!("propagator table is not symmetric at ({a},{b})")));
                }
            }
        }
        Ok(Self { entries })
    }

    /// One matrix with unit propagator.
    pub fn single() -> Self {
        Self {
            entries: vec![vec![BigRational::one()]],
        }
    }

    pub fn identity(k: usize) -> Self {
        let entries = (0..k)
            .map(|a| {
                (0..k)
                    .map(|b| if a == b { BigRational::one() } else { BigRational::zero() })
                    .collect()
            })
            .collect();
        Self { entries }
    }

    /// Potts spins: weight `1 + extra` between equal labels and `1` otherwise,
    /// where `extra = e^K - 1`.
    pub fn potts(q: usize, extra: BigRational) -> Self {
        let entries = (0..q)
            .map(|a| {
                (0..q)
                    .map(|b| if a == b { BigRational::one() + &extra } else { BigRational::one() })
                    .collect()
            })
            .collect();
        Self { entries }
    }

    /// O(n) loop model: label 1 is the matrix `B`, labels `2..=n+1` are the `A_c`,
    /// with weight `K` on each `A_c A_c` propagator.
    pub fn o_n(n: usize, k: BigRational) -> Self {
        let size = n + 1;
        let entries = (0..size)
            .map(|a| {
                (0..size)
                    .map(|b| match (a, b) {
                        (0, 0) => BigRational::one(),
                        (a, b) if a == b => k.clone(),
                        _ => BigRational::zero(),
                    })
                    .collect()
            })
            .collect();
        Self { entries }
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    /// Weight between 1-based labels.
    pub fn weight(&self, a: usize, b: usize) -> &BigRational {
        &self.entries[a - 1][b - 1]
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: PropagatorJson =
            serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("propagator JSON: {e}")))?;
        let entries = raw
            .entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|s| parse_rational(s).ok_or_else(|| Error::InvalidInput(format!("not a rational: {s:?}"))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(entries)
    }

    pub fn to_json(&self) -> String {
        let raw = PropagatorJson {
            entries: self.entries.iter().map(|r| r.iter().map(|c| c.to_string()).collect()).collect(),
        };
        serde_json::to_string(&raw).expect("serializable")
    }
}

/// Genus data of one connected component of a saturated star system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentGenus {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub genus: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceData {
    pub faces: usize,
    pub components: Vec<ComponentGenus>,
}

impl FaceData {
    pub fn total_genus(&self) -> usize {
        self.components.iter().map(|c| c.genus).sum()
    }
}

fn check_pairing(h: usize, pairing: &[usize]) -> Result<()> {
    if pairing.len() != h {
        return Err(Error::Dimension(format!("pairing has {} entries for {h} half-edges", pairing.len())));
    }
    for (i, &j) in pairing.iter().enumerate() {
        if j >= h || j == i || pairing[j] != i {
            return Err(Error::InvalidInput(format!("half-edge {i} is not properly paired")));
        }
    }
    Ok(())
}

/// Number of cycles of `h -> succ[pairing[h]]`.
fn count_faces(succ: &[usize], pairing: &[usize], seen: &mut [bool]) -> usize {
    seen.iter_mut().for_each(|s| *s = false);
    let mut faces = 0;
    for start in 0..succ.len() {
        if seen[start] {
            continue;
        }
        faces += 1;
        let mut h = start;
        while !seen[h] {
            seen[h] = true;
            h = succ[pairing[h]];
        }
    }
    faces
}

/// Faces of the fatgraph obtained by pairing the half-edges of `s`, and the genus of
/// each connected component from `2 - 2h = V - E + F`.
pub fn faces_and_genus(s: &StarSystem, pairing: &[usize]) -> Result<FaceData> {
    let h = s.half_edges();
    check_pairing(h, pairing)?;
    let (owner, succ) = s.rotation();
    let nstars = s.stars.len();

    let mut parent: Vec<usize> = (0..nstars).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (i, &j) in pairing.iter().enumerate() {
        let (a, b) = (find(&mut parent, owner[i]), find(&mut parent, owner[j]));
        if a != b {
            parent[a] = b;
        }
    }

    let mut per_root: BTreeMap<usize, (usize, usize, usize)> = BTreeMap::new();
    for v in 0..nstars {
        let r = find(&mut parent, v);
        per_root.entry(r).or_default().0 += 1;
    }
    for (i, &j) in pairing.iter().enumerate() {
        if i < j {
            let r = find(&mut parent, owner[i]);
            per_root.entry(r).or_default().1 += 1;
        }
    }
    let mut seen = vec![false; h];
    let mut faces = 0;
    for start in 0..h {
        if seen[start] {
            continue;
        }
        faces += 1;
        let r = find(&mut parent, owner[start]);
        per_root.entry(r).or_default().2 += 1;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = succ[pairing[x]];
        }
    }

    let components = per_root
        .values()
        .map(|&(v, e, f)| {
            let chi = v as i64 - e as i64 + f as i64;
            debug_assert!(chi <= 2 && (2 - chi) % 2 == 0);
            ComponentGenus {
                vertices: v,
                edges: e,
                faces: f,
                genus: ((2 - chi) / 2) as usize,
            }
        })
        .collect();
    Ok(FaceData { faces, components })
}

/// Genus of a pairing of the `2p` half-edges of a single star.
pub fn single_star_genus(pairing: &[usize]) -> usize {
    let h = pairing.len();
    let succ: Vec<usize> = (0..h).map(|i| (i + 1) % h).collect();
    let mut seen = vec![false; h];
    let f = count_faces(&succ, pairing, &mut seen);
    (1 + h / 2 - f) / 2
}

/// `(h-1)!!` for even `h`, zero for odd `h`.
pub fn pairing_count(h: usize) -> u128 {
    if h % 2 == 1 {
        return 0;
    }
    (1..h as u128).step_by(2).fold(1u128, |acc, k| acc.saturating_mul(k))
}

/// Calls `f` on every perfect pairing of `0..h` whose pairs satisfy `allowed`.
/// The lowest unpaired element is always paired first.
pub fn for_each_pairing(h: usize, allowed: &dyn Fn(usize, usize) -> bool, f: &mut dyn FnMut(&[usize])) {
    if h % 2 == 1 {
        return;
    }
    let mut pairing = vec![usize::MAX; h];
    pair_rec(&mut pairing, 0, allowed, f);
}

fn pair_rec(pairing: &mut [usize], from: usize, allowed: &dyn Fn(usize, usize) -> bool, f: &mut dyn FnMut(&[usize])) {
    let Some(i) = (from..pairing.len()).find(|&i| pairing[i] == usize::MAX) else {
        f(pairing);
        return;
    };
    for j in i + 1..pairing.len() {
        if pairing[j] == usize::MAX && allowed(i, j) {
            pairing[i] = j;
            pairing[j] = i;
            pair_rec(pairing, i + 1, allowed, f);
            pairing[i] = usize::MAX;
            pairing[j] = usize::MAX;
        }
    }
}

/// `< Π_stars Tr(word) >` as a Laurent polynomial in `N`.
pub fn gaussian_average(s: &StarSystem, p: &PropagatorTable, limit: &WorkLimit) -> Result<LaurentN> {
    let labels = s.labels();
    if let Some(&bad) = labels.iter().find(|&&a| a == 0 || a > p.size()) {
        return Err(Error::InvalidInput(format!("matrix label {bad} outside 1..={}", p.size())));
    }
    let h = labels.len();
    if h % 2 == 1 {
        return Ok(LaurentN::zero());
    }
    if h == 0 {
        return Ok(LaurentN::one());
    }
    limit.check("pairings of the star system", pairing_count(h))?;
    let (_, succ) = s.rotation();
    let e = (h / 2) as i64;
    let allowed = |a: usize, b: usize| !p.weight(labels[a], labels[b]).is_zero();

    // Shard on the partner of half-edge 0.
    let shards: Vec<usize> = (1..h).filter(|&j| allowed(0, j)).collect();
    let partials: Vec<BTreeMap<i64, BigRational>> = shards
        .par_iter()
        .map(|&j| {
            let mut acc: BTreeMap<i64, BigRational> = BTreeMap::new();
            let mut pairing = vec![usize::MAX; h];
            pairing[0] = j;
            pairing[j] = 0;
            let mut seen = vec![false; h];
            let mut visit = |pr: &[usize]| {
                let f = count_faces(&succ, pr, &mut seen) as i64;
                let mut w = BigRational::one();
                for (a, &b) in pr.iter().enumerate() {
                    if a < b {
                        w *= p.weight(labels[a], labels[b]);
                    }
                }
                *acc.entry(f - e).or_insert_with(BigRational::zero) += w;
            };
            pair_rec(&mut pairing, 1, &allowed, &mut visit);
            acc
        })
        .collect();

    let mut out = LaurentN::zero();
    for part in partials {
        for (k, c) in part {
            out.add_term(k, c);
        }
    }
    Ok(out)
}

/// A vertex type in a perturbative expansion: the term `N * factor * g * Tr(word)`
/// in the exponent, with coupling `g` carrying the given truncation grade.
#[derive(Clone, Debug, PartialEq)]
pub struct VertexType {
    pub word: Vec<usize>,
    pub factor: BigRational,
    pub grade: u32,
}

/// Grading used to truncate expansions in the couplings.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Grading {
    /// Each vertex counts 1.
    VertexCount,
    /// Each vertex counts its valency.
    HalfEdges,
}

/// Vertex types `g_i Tr(M^i) / i` of a one-matrix potential.
pub fn one_matrix_vertices(valencies: &[u32], grading: Grading) -> Vec<VertexType> {
    valencies
        .iter()
        .map(|&i| VertexType {
            word: vec![1; i as usize],
            factor: BigRational::new(BigInt::one(), BigInt::from(i)),
            grade: match grading {
                Grading::VertexCount => 1,
                Grading::HalfEdges => i,
            },
        })
        .collect()
}

fn multi_indices(grades: &[u32], order: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for &g in grades {
        let mut next = Vec::new();
        for e in &out {
            let used: u32 = e.iter().zip(grades).map(|(a, w)| a * w).sum();
            let mut k = 0;
            while used + k * g <= order {
                let mut f = e.clone();
                f.push(k);
                next.push(f);
                k += 1;
            }
        }
        out = next;
    }
    out
}

/// `Z = < exp(N Σ_t factor_t g_t Tr(word_t)) >` expanded in the couplings `g_t`.
pub fn partition_function(
    types: &[VertexType],
    p: &PropagatorTable,
    order: u32,
    limit: &WorkLimit,
) -> Result<MultiSeries<LaurentN>> {
    if types.iter().any(|t| t.grade == 0) {
        return Err(Error::InvalidInput("vertex grades must be positive".into()));
    }
    let grades: Vec<u32> = types.iter().map(|t| t.grade).collect();
    let indices = multi_indices(&grades, order);
    let total: u128 = indices
        .iter()
        .map(|e| {
            let h: usize = e.iter().zip(types).map(|(&n, t)| n as usize * t.word.len()).sum();
            pairing_count(h)
        })
        .fold(0u128, u128::saturating_add);
    limit.check("pairings in the free-energy expansion", total)?;

    let terms: Vec<(Vec<u32>, LaurentN)> = indices
        .par_iter()
        .map(|e| -> Result<(Vec<u32>, LaurentN)> {
            let mut stars = Vec::new();
            let mut scale = BigRational::one();
            let mut npow = 0i64;
            for (&n, t) in e.iter().zip(types) {
                for k in 1..=n {
                    stars.push(t.word.clone());
                    scale = scale * &t.factor / BigRational::from_integer(BigInt::from(k));
                }
                npow += n as i64;
            }
            let avg = gaussian_average(&StarSystem::new(stars), p, &WorkLimit::unlimited())?;
            Ok((e.clone(), avg.scale(&scale) * LaurentN::monomial(npow, BigRational::one())))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut z = MultiSeries::zero(grades, order);
    for (e, c) in terms {
        z.add_term(e, c);
    }
    Ok(z)
}

/// `log Z`, the generating function of connected fatgraphs.
pub fn connected_free_energy_general(
    types: &[VertexType],
    p: &PropagatorTable,
    order: u32,
    limit: &WorkLimit,
) -> Result<MultiSeries<LaurentN>> {
    partition_function(types, p, order, limit)?.log()
}

/// One-matrix connected free energy for couplings `g_i` of `Tr(M^i)/i`,
/// truncated in the total number of vertices.
pub fn connected_free_energy(
    valencies: &[u32],
    p: &PropagatorTable,
    order: u32,
    limit: &WorkLimit,
) -> Result<MultiSeries<LaurentN>> {
    connected_free_energy_general(&one_matrix_vertices(valencies, Grading::VertexCount), p, order, limit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, rat};

    fn avg(word: Vec<usize>) -> LaurentN {
        gaussian_average(&StarSystem::single(word), &PropagatorTable::single(), &WorkLimit::default()).unwrap()
    }

    #[test]
    fn one_matrix_moments() {
        assert_eq!(avg(vec![1, 1]), LaurentN::monomial(1, int(1)));
        assert_eq!(avg(vec![1; 4]), LaurentN::from_terms([(1, int(2)), (-1, int(1))]));
        assert!(avg(vec![1; 3]).is_zero());
        assert_eq!(avg(vec![]), LaurentN::one());
    }

    #[test]
    fn two_colour_crossing_word() {
        let s = StarSystem::single(vec![1, 2, 1, 2]);
        let a = gaussian_average(&s, &PropagatorTable::identity(2), &WorkLimit::default()).unwrap();
        assert_eq!(a, LaurentN::monomial(-1, int(1)));
    }

    #[test]
    fn faces_of_four_star() {
        let s = StarSystem::single(vec![1; 4]);
        let adj = faces_and_genus(&s, &[1, 0, 3, 2]).unwrap();
        assert_eq!(adj.faces, 3);
        assert_eq!(adj.total_genus(), 0);
        let cross = faces_and_genus(&s, &[2, 3, 0, 1]).unwrap();
        assert_eq!(cross.faces, 1);
        assert_eq!(cross.total_genus(), 1);
    }

    #[test]
    fn twelve_half_edge_genus_two() {
        // Two crossed blocks and two petals: six edges bounding three faces.
        let s = StarSystem::single(vec![1; 12]);
        let pairing = [2, 3, 0, 1, 6, 7, 4, 5, 9, 8, 11, 10];
        let d = faces_and_genus(&s, &pairing).unwrap();
        assert_eq!(d.faces, 3);
        assert_eq!(d.total_genus(), 2);
        let petals = [11, 2, 1, 4, 3, 10, 7, 6, 9, 8, 5, 0];
        let d = faces_and_genus(&s, &petals).unwrap();
        assert_eq!(d.faces, 7);
        assert_eq!(d.total_genus(), 0);
    }

    #[test]
    fn malformed_pairing_rejected() {
        let s = StarSystem::single(vec![1; 4]);
        assert!(faces_and_genus(&s, &[1, 0, 2, 3]).is_err());
        assert!(faces_and_genus(&s, &[1, 0]).is_err());
    }

    #[test]
    fn disconnected_components_get_own_genus() {
        let s = StarSystem::new(vec![vec![1; 4], vec![1, 1]]);
        let d = faces_and_genus(&s, &[2, 3, 0, 1, 5, 4]).unwrap();
        assert_eq!(d.components.len(), 2);
        let mut g: Vec<usize> = d.components.iter().map(|c| c.genus).collect();
        g.sort();
        assert_eq!(g, vec![0, 1]);
    }

    #[test]
    fn quartic_order_one() {
        let f = connected_free_energy(&[4], &PropagatorTable::single(), 1, &WorkLimit::default()).unwrap();
        assert_eq!(f.coeff(&[1]), LaurentN::from_terms([(2, rat(1, 2)), (0, rat(1, 4))]));
        let cubic = connected_free_energy(&[3], &PropagatorTable::single(), 1, &WorkLimit::default()).unwrap();
        assert!(cubic.coeff(&[1]).is_zero());
        let none = connected_free_energy(&[], &PropagatorTable::single(), 3, &WorkLimit::default()).unwrap();
        assert!(none.is_empty());
    }

    #[test]
    fn cubic_order_two_is_theta_and_dumbbell() {
        // Planar theta (1/6) and dumbbell (1/2); the toroidal theta gives 1/6.
        let f = connected_free_energy(&[3], &PropagatorTable::single(), 2, &WorkLimit::default()).unwrap();
        let c = f.coeff(&[2]);
        assert_eq!(c.coeff(2), rat(2, 3));
        assert_eq!(c.coeff(0), rat(1, 6));
    }

    #[test]
    fn potts_and_o_n_tables() {
        let p = PropagatorTable::potts(3, int(2));
        assert_eq!(*p.weight(1, 1), int(3));
        assert_eq!(*p.weight(1, 2), int(1));
        let o = PropagatorTable::o_n(2, rat(1, 3));
        assert_eq!(*o.weight(1, 1), int(1));
        assert_eq!(*o.weight(2, 2), rat(1, 3));
        assert_eq!(*o.weight(2, 3), int(0));
        assert_eq!(*o.weight(1, 3), int(0));
    }

    #[test]
    fn json_round_trip() {
        let p = PropagatorTable::potts(2, rat(1, 2));
        let back = PropagatorTable::from_json(&p.to_json()).unwrap();
        assert_eq!(back, p);
        assert!(PropagatorTable::from_json(r#"{"entries":[["1","2"],["3","1"]]}"#).is_err());
        let s: StarSystem = serde_json::from_str(r#"{"stars":[[1,2,1,2]]}"#).unwrap();
        assert_eq!(s.half_edges(), 4);
    }

    #[test]
    fn work_limit_is_enforced() {
        let tight = WorkLimit::new(10).unwrap();
        let r = gaussian_average(&StarSystem::single(vec![1; 8]), &PropagatorTable::single(), &tight);
        assert!(r.unwrap_err().is_resource_limit());
    }

    #[test]
    fn pairing_counts() {
        assert_eq!(pairing_count(0), 1);
        assert_eq!(pairing_count(6), 15);
        assert_eq!(pairing_count(5), 0);
        let mut n = 0;
        for_each_pairing(8, &|_, _| true, &mut |_| n += 1);
        assert_eq!(n, 105);
    }
}
