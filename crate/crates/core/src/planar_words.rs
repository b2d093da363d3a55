//! Planar Gaussian averages of trace words in several matrices.
//!
//! At large `N` the normalised average of `Tr(M_{a_1} ... M_{a_p})` counts the
//! noncrossing pairings of the letters in which paired letters carry the same
//! colour.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::arch::catalan;
use crate::error::{Error, Result};
use crate::limits::WorkLimit;

/// Number of colour-respecting noncrossing perfect matchings of the letters of `w`.
pub fn gamma_word(w: &[usize]) -> BigUint {
    let len = w.len();
    if len % 2 == 1 {
        return BigUint::zero();
    }
    // f[i][j] counts matchings of the half-open interval [i, j).
    let mut f = vec![vec![BigUint::zero(); len + 1]; len + 1];
    for i in 0..=len {
        f[i][i] = BigUint::one();
    }
    for span in (2..=len).step_by(2) {
        for i in 0..=len - span {
            let j = i + span;
            let mut acc = BigUint::zero();
            for m in (i + 1..j).step_by(2) {
                if w[m] == w[i] && !f[i + 1][m].is_zero() && !f[m + 1][j].is_zero() {
                    acc += &f[i + 1][m] * &f[m + 1][j];
                }
            }
            f[i][j] = acc;
        }
    }
    f[0][len].clone()
}

/// Planar average of a single-matrix power: `catalan(n/2)` for even `n`.
pub fn eta(n: usize) -> BigUint {
    if n % 2 == 0 {
        catalan(n as u64 / 2)
    } else {
        BigUint::zero()
    }
}

/// The word with the given digits in base `q`, colours `1..=q`, most significant first.
fn decode(mut index: u64, q: usize, len: usize, out: &mut [usize]) {
    for slot in out[..len].iter_mut().rev() {
        *slot = (index % q as u64) as usize + 1;
        index /= q as u64;
    }
}

fn word_count(q: usize, len: usize) -> Option<u64> {
    (q as u64).checked_pow(len as u32)
}

fn check_args(n: usize, q: usize) -> Result<()> {
    if n == 0 || q == 0 {
        return Err(Error::InvalidInput("word sums need n >= 1 and q >= 1".into()));
    }
    Ok(())
}

/// Sum of `f(word)` over words of length `len` whose first letter is colour 1.
fn sum_first_fixed(q: usize, len: usize, f: impl Fn(&[usize]) -> BigUint + Sync) -> BigUint {
    let rest = word_count(q, len - 1).expect("checked by caller");
    (0..rest)
        .into_par_iter()
        .fold(
            || (BigUint::zero(), vec![1usize; len]),
            |(acc, mut buf), idx| {
                decode(idx, q, len - 1, &mut buf[1..]);
                (acc + f(&buf), buf)
            },
        )
        .map(|(acc, _)| acc)
        .reduce(BigUint::zero, |a, b| a + b)
}

/// Sum of `f(word)` over all `q^len` words.
fn sum_all(q: usize, len: usize, f: impl Fn(&[usize]) -> BigUint + Sync) -> BigUint {
    let total = word_count(q, len).expect("checked by caller");
    (0..total)
        .into_par_iter()
        .fold(
            || (BigUint::zero(), vec![0usize; len]),
            |(acc, mut buf), idx| {
                decode(idx, q, len, &mut buf);
                (acc + f(&buf), buf)
            },
        )
        .map(|(acc, _)| acc)
        .reduce(BigUint::zero, |a, b| a + b)
}

fn word_work(q: usize, len: usize, limit: &WorkLimit, what: &str) -> Result<()> {
    let count = word_count(q, len).map(u128::from).unwrap_or(u128::MAX);
    limit.check(what, count.saturating_mul((len as u128).pow(3).max(1)))
}

/// `Σ_w γ(w)^2` over words of length `2n` in `q` colours: the meander polynomial at `q`.
pub fn meander_poly_via_words(n: usize, q: usize, limit: &WorkLimit) -> Result<BigUint> {
    check_args(n, q)?;
    word_work(q, 2 * n, limit, "meander word sum")?;
    let reduced = sum_first_fixed(q, 2 * n, |w| {
        let g = gamma_word(w);
        &g * &g
    });
    Ok(reduced * BigUint::from(q))
}

/// Same sum without the colour-symmetry reduction.
pub fn meander_poly_via_words_unreduced(n: usize, q: usize, limit: &WorkLimit) -> Result<BigUint> {
    check_args(n, q)?;
    word_work(q, 2 * n, limit, "meander word sum")?;
    Ok(sum_all(q, 2 * n, |w| {
        let g = gamma_word(w);
        &g * &g
    }))
}

fn palindrome_gamma(a: &[usize]) -> BigUint {
    let mut w = a.to_vec();
    w.extend(a.iter().rev());
    gamma_word(&w)
}

/// `Σ_a γ(a_1 .. a_n a_n .. a_1)` over words of length `n`: the semi-meander polynomial at `q`.
pub fn semimeander_poly_via_words(n: usize, q: usize, limit: &WorkLimit) -> Result<BigUint> {
    check_args(n, q)?;
    word_work(q, n, limit, "semi-meander word sum")?;
    Ok(sum_first_fixed(q, n, palindrome_gamma) * BigUint::from(q))
}

pub fn semimeander_poly_via_words_unreduced(n: usize, q: usize, limit: &WorkLimit) -> Result<BigUint> {
    check_args(n, q)?;
    word_work(q, n, limit, "semi-meander word sum")?;
    Ok(sum_all(q, n, palindrome_gamma))
}

/// Planar average of `Tr(M_1^{b_1} M_2^{b_2} M_1^{b_3} ...)` in two matrices,
/// through the quadratic recursion over block splittings with `ω = -1`.
pub fn eta_two_colour_blocks(blocks: &[usize]) -> BigInt {
    eta_blocks_rec(&normalise_blocks(blocks))
}

/// Removes empty blocks and merges cyclically adjacent blocks of equal colour,
/// leaving an even number of alternating blocks or a single block.
fn normalise_blocks(blocks: &[usize]) -> Vec<usize> {
    // Track colours explicitly: block i has colour i % 2.
    let mut out: Vec<(usize, usize)> = Vec::new();
    for (i, &x) in blocks.iter().enumerate() {
        if x == 0 {
            continue;
        }
        let c = i % 2;
        match out.last_mut() {
            Some((lc, lx)) if *lc == c => *lx += x,
            _ => out.push((c, x)),
        }
    }
    if out.len() > 1 && out[0].0 == out[out.len() - 1].0 {
        let (_, x) = out.pop().expect("nonempty");
        out[0].1 += x;
    }
    out.into_iter().map(|(_, x)| x).collect()
}

fn eta_blocks_rec(b: &[usize]) -> BigInt {
    match b.len() {
        0 => BigInt::one(),
        1 => BigInt::from(eta(b[0])),
        len => {
            let mut acc = BigInt::zero();
            for i in 1..len {
                let left = eta_blocks_rec(&normalise_blocks(&b[..i]));
                // The right part starts with colour i % 2; colour symmetry makes
                // the starting colour irrelevant.
                let right = eta_blocks_rec(&normalise_blocks(&b[i..]));
                let term = left * right;
                if i % 2 == 1 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc
        }
    }
}
