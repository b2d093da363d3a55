//! Arch configurations: noncrossing perfect matchings of `2n` bridges on a line.
//!
//! Bridges are numbered `0..2n` from left to right. The canonical serialization
//! is the Dyck word, `(` for the left end of an arch and `)` for its right end.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};

/// `(2p)! / ((p+1)! p!)`, computed through `c_{k+1} = c_k * 2(2k+1) / (k+2)`.
pub fn catalan(p: u64) -> BigUint {
    let mut c = BigUint::one();
    for k in 0..p {
        c = c * BigUint::from(2 * (2 * k + 1)) / BigUint::from(k + 2);
    }
    c
}

/// Catalan number as `u64`; exact for `p <= 35`.
pub fn catalan_u64(p: u64) -> Option<u64> {
    let mut c: u128 = 1;
    for k in 0..p as u128 {
        c = c.checked_mul(2 * (2 * k + 1))? / (k + 2);
    }
    u64::try_from(c).ok()
}

/// Balanced word over `(` / `)`; `true` is an opening mark.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DyckCode {
    word: Vec<bool>,
}

impl DyckCode {
    pub fn new(word: Vec<bool>) -> Result<Self> {
        let mut depth: i64 = 0;
        for &open in &word {
            depth += if open { 1 } else { -1 };
            if depth < 0 {
                return Err(Error::InvalidInput("Dyck word has a prefix with more closings".into()));
            }
        }
        if depth != 0 || word.is_empty() {
            return Err(Error::InvalidInput("Dyck word must be nonempty and balanced".into()));
        }
        Ok(Self { word })
    }

    pub fn word(&self) -> &[bool] {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    /// Successor in lexicographic order with `(` < `)`, or `None` for the last word.
    fn successor(&self) -> Option<DyckCode> {
        let w = &self.word;
        let len = w.len();
        let mut depth_before = vec![0i64; len + 1];
        for (i, &o) in w.iter().enumerate() {
            depth_before[i + 1] = depth_before[i] + if o { 1 } else { -1 };
        }
        for i in (0..len).rev() {
            if w[i] && depth_before[i] >= 1 {
                let d = depth_before[i] - 1;
                let rest = (len - i - 1) as i64;
                if d > rest {
                    continue;
                }
                let opens = ((rest - d) / 2) as usize;
                let closes = rest as usize - opens;
                let mut next = w[..i].to_vec();
                next.push(false);
                next.extend(std::iter::repeat_n(true, opens));
                next.extend(std::iter::repeat_n(false, closes));
                return Some(DyckCode { word: next });
            }
        }
        None
    }
}

/// Lexicographic order with `(` before `)`.
impl Ord for DyckCode {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let key = |w: &[bool]| w.iter().map(|&o| !o).collect::<Vec<bool>>();
        key(&self.word).cmp(&key(&other.word))
    }
}

impl PartialOrd for DyckCode {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for DyckCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.word.iter().map(|&o| if o { '(' } else { ')' }).collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for DyckCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DyckCode({self})")
    }
}

impl FromStr for DyckCode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let word = s
            .chars()
            .map(|c| match c {
                '(' => Ok(true),
                ')' => Ok(false),
                other => Err(Error::InvalidInput(format!("unexpected character {other:?} in Dyck word"))),
            })
            .collect::<Result<Vec<_>>>()?;
        DyckCode::new(word)
    }
}

/// A noncrossing perfect matching of `2n` bridges.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ArchConfig {
    partner: Vec<u16>,
}

impl ArchConfig {
    /// Validates that `partner` is a fixed-point-free noncrossing involution.
    pub fn new(partner: Vec<usize>) -> Result<Self> {
        let len = partner.len();
        if len == 0 || len % 2 != 0 {
            return Err(Error::InvalidInput(format!("arch configuration needs a positive even size, got {len}")));
        }
        if len > u16::MAX as usize {
            return Err(Error::InvalidInput("arch configuration too large".into()));
        }
        for (i, &j) in partner.iter().enumerate() {
            if j >= len || j == i || partner[j] != i {
                return Err(Error::InvalidInput(format!("bridge {i} is not properly matched")));
            }
        }
        // Noncrossing iff the induced word is balanced with matching brackets.
        let mut stack = Vec::new();
        for (i, &j) in partner.iter().enumerate() {
            if j > i {
                stack.push(i);
            } else if stack.pop() != Some(j) {
                return Err(Error::InvalidInput(format!("arch ({j},{i}) crosses another arch")));
            }
        }
        Ok(Self {
            partner: partner.into_iter().map(|j| j as u16).collect(),
        })
    }

    pub(crate) fn from_raw(partner: Vec<u16>) -> Self {
        debug_assert!(Self::new(partner.iter().map(|&j| j as usize).collect()).is_ok());
        Self { partner }
    }

    pub fn from_dyck(code: &DyckCode) -> Self {
        let mut partner = vec![0u16; code.len()];
        let mut stack = Vec::new();
        for (i, &open) in code.word().iter().enumerate() {
            if open {
                stack.push(i);
            } else {
                let j = stack.pop().expect("validated Dyck word");
                partner[i] = j as u16;
                partner[j] = i as u16;
            }
        }
        Self { partner }
    }

    pub fn to_dyck(&self) -> DyckCode {
        DyckCode {
            word: self.partner.iter().enumerate().map(|(i, &j)| (j as usize) > i).collect(),
        }
    }

    /// Number of bridges `2n`.
    pub fn order_2n(&self) -> usize {
        self.partner.len()
    }

    /// Number of arches `n`.
    pub fn n(&self) -> usize {
        self.partner.len() / 2
    }

    pub fn partner(&self, i: usize) -> usize {
        self.partner[i] as usize
    }

    pub fn matching(&self) -> Vec<usize> {
        self.partner.iter().map(|&j| j as usize).collect()
    }

    pub(crate) fn raw(&self) -> &[u16] {
        &self.partner
    }

    /// Arches as `(left, right)` pairs sorted by left end.
    pub fn arches(&self) -> Vec<(usize, usize)> {
        self.partner
            .iter()
            .enumerate()
            .filter(|(i, &j)| (j as usize) > *i)
            .map(|(i, &j)| (i, j as usize))
            .collect()
    }

    /// Arches contained in no other arch.
    pub fn external_arches(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut i = 0;
        while i < self.partner.len() {
            let j = self.partner[i] as usize;
            out.push((i, j));
            i = j + 1;
        }
        out
    }
}

impl fmt::Display for ArchConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dyck())
    }
}

impl fmt::Debug for ArchConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ArchConfig({self})")
    }
}

impl FromStr for ArchConfig {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(ArchConfig::from_dyck(&s.parse()?))
    }
}

/// Stream of all arch configurations of order `2n` in lexicographic Dyck order.
pub struct ArchIter {
    next: Option<DyckCode>,
}

impl Iterator for ArchIter {
    type Item = ArchConfig;
    fn next(&mut self) -> Option<ArchConfig> {
        let cur = self.next.take()?;
        self.next = cur.successor();
        Some(ArchConfig::from_dyck(&cur))
    }
}

pub fn enumerate_arches(n: usize) -> Result<ArchIter> {
    if n == 0 {
        return Err(Error::InvalidInput("arch enumeration needs n >= 1".into()));
    }
    let mut first = vec![true; n];
    first.extend(std::iter::repeat_n(false, n));
    Ok(ArchIter {
        next: Some(DyckCode { word: first }),
    })
}

/// `n` concentric arches: bridge `i` is matched with `2n-1-i`.
pub fn rainbow(n: usize) -> Result<ArchConfig> {
    if n == 0 {
        return Err(Error::InvalidInput("rainbow needs n >= 1".into()));
    }
    Ok(ArchConfig::from_raw((0..2 * n).map(|i| (2 * n - 1 - i) as u16).collect()))
}

/// Number of closed loops formed by `a` above the river and the mirror image of `b` below.
pub fn glue_components(a: &ArchConfig, b: &ArchConfig) -> Result<usize> {
    if a.order_2n() != b.order_2n() {
        return Err(Error::Dimension(format!(
            "cannot glue arch systems of orders {} and {}",
            a.order_2n(),
            b.order_2n()
        )));
    }
    Ok(count_loops(a.raw(), b.raw()))
}

/// Loops of two involutions on the same bridge set: cycles of `b ∘ a` counted
/// once per pair of mirror orbits.
pub(crate) fn count_loops(a: &[u16], b: &[u16]) -> usize {
    let len = a.len();
    let mut seen = vec![false; len];
    let mut loops = 0;
    for start in 0..len {
        if seen[start] {
            continue;
        }
        loops += 1;
        let mut j = start;
        loop {
            seen[j] = true;
            let k = a[j] as usize;
            seen[k] = true;
            j = b[k] as usize;
            if j == start {
                break;
            }
        }
    }
    loops
}

/// Number of arches passing over the midpoint of the river.
pub fn winding(a: &ArchConfig) -> usize {
    let n = a.n();
    a.partner
        .iter()
        .enumerate()
        .filter(|(i, &j)| *i < n && (j as usize) >= n)
        .count()
}
