//! Asymptotic fits `s ~ A R^N N^{-α}` of positive integer sequences.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Outcome of a power-law fit. Raw and extrapolated estimates are kept per
/// sequence index so that convergence can be inspected.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FitResult {
    pub r_estimate: f64,
    pub alpha_estimate: f64,
    /// First and last sequence index used by the three-point estimates.
    pub window: (usize, usize),
    pub raw_r: Vec<f64>,
    pub raw_alpha: Vec<f64>,
    pub extrapolated_r: Vec<f64>,
    pub extrapolated_alpha: Vec<f64>,
    /// Successive differences of the extrapolated `R` estimates.
    pub r_deltas: Vec<f64>,
    pub alpha_deltas: Vec<f64>,
}

/// Natural logarithm of an arbitrarily large integer.
pub fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits < 1000 {
        return x.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("64-bit mantissa");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

fn richardson(values: &[f64], ns: &[f64]) -> Vec<f64> {
    values
        .windows(2)
        .zip(ns.windows(2))
        .map(|(v, n)| (n[1] * v[1] - n[0] * v[0]) / (n[1] - n[0]))
        .collect()
}

fn deltas(v: &[f64]) -> Vec<f64> {
    v.windows(2).map(|w| w[1] - w[0]).collect()
}

/// Fits `s_N ~ A R^N N^{-α}` where `seq[i]` is the term at `N = stride (i + 1)`.
///
/// Consecutive log-ratios `r_n = log(s_{n+1}/s_n)` at three points eliminate the
/// prefactor, giving `α` and `log R` at every interior index; one Richardson step
/// in `1/n` then removes the leading correction.
pub fn fit_power_law(seq: &[BigUint], stride: usize) -> Result<FitResult> {
    if stride == 0 {
        return Err(Error::InvalidInput("stride must be positive".into()));
    }
    if seq.len() < 6 {
        return Err(Error::InvalidInput(format!("need at least 6 terms, got {}", seq.len())));
    }
    if seq.iter().any(Zero::is_zero) {
        return Err(Error::Domain("sequence terms must be positive".into()));
    }
    fit_logs(&seq.iter().map(ln_big).collect::<Vec<_>>(), stride)
}

/// As [`fit_power_law`] for positive rational terms.
pub fn fit_power_law_rational(seq: &[BigRational], stride: usize) -> Result<FitResult> {
    if stride == 0 {
        return Err(Error::InvalidInput("stride must be positive".into()));
    }
    if seq.len() < 6 {
        return Err(Error::InvalidInput(format!("need at least 6 terms, got {}", seq.len())));
    }
    if seq.iter().any(|x| !x.is_positive()) {
        return Err(Error::Domain("sequence terms must be positive".into()));
    }
    let logs: Vec<f64> = seq
        .iter()
        .map(|x| {
            let num = x.numer().to_biguint().expect("positive");
            let den = x.denom().to_biguint().expect("positive");
            ln_big(&num) - ln_big(&den)
        })
        .collect();
    fit_logs(&logs, stride)
}

fn fit_logs(logs: &[f64], stride: usize) -> Result<FitResult> {
    let r: Vec<f64> = logs.windows(2).map(|w| w[1] - w[0]).collect();

    let mut raw_alpha = Vec::new();
    let mut raw_log_r = Vec::new();
    let mut ns = Vec::new();
    for i in 1..r.len() {
        let n = (i + 1) as f64;
        let up = ((n + 1.0) / n).ln();
        let down = (n / (n - 1.0)).ln();
        let alpha = -(r[i] - r[i - 1]) / (up - down);
        raw_alpha.push(alpha);
        raw_log_r.push(r[i] + alpha * up);
        ns.push(n);
    }
    let ext_alpha = richardson(&raw_alpha, &ns);
    let ext_log_r = richardson(&raw_log_r, &ns);
    let to_r = |v: &[f64]| -> Vec<f64> { v.iter().map(|l| (l / stride as f64).exp()).collect() };
    let raw_r = to_r(&raw_log_r);
    let extrapolated_r = to_r(&ext_log_r);

    let r_estimate = *extrapolated_r.last().expect("at least 6 terms");
    let alpha_estimate = *ext_alpha.last().expect("at least 6 terms");
    if !r_estimate.is_finite() || !alpha_estimate.is_finite() {
        return Err(Error::Domain("fit produced non-finite estimates".into()));
    }
    Ok(FitResult {
        r_estimate,
        alpha_estimate,
        window: (1, logs.len() - 2),
        r_deltas: deltas(&extrapolated_r),
        alpha_deltas: deltas(&ext_alpha),
        raw_r,
        raw_alpha,
        extrapolated_r,
        extrapolated_alpha: ext_alpha,
    })
}

/// Large-`q` expansion coefficients of the one-river radius, in powers of `1/q`,
/// multiplying `2√q`.
pub const R_SERIES: [(i32, f64); 7] = [
    (0, 1.0),
    (1, 1.0),
    (2, 1.5),
    (3, -1.5),
    (4, -29.0 / 8.0),
    (5, -81.0 / 8.0),
    (6, -89.0 / 16.0),
];

/// Large-`q` expansion of the semi-meander radius: `(power of q, coefficient)`.
pub const RBAR_SERIES: [(i32, f64); 20] = [
    (1, 1.0),
    (0, 1.0),
    (-1, 2.0),
    (-2, 2.0),
    (-3, 2.0),
    (-4, 0.0),
    (-5, -4.0),
    (-6, -8.0),
    (-7, -12.0),
    (-8, -10.0),
    (-9, -4.0),
    (-10, 12.0),
    (-11, 46.0),
    (-12, 98.0),
    (-13, 154.0),
    (-14, 124.0),
    (-15, 10.0),
    (-16, -102.0),
    (-17, 20.0),
    (-18, -64.0),
];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LargeQReference {
    pub q: f64,
    pub r_series: f64,
    pub rbar_series: f64,
}

/// Truncated large-`q` expansions of the meander and semi-meander radii.
pub fn large_q_reference(q: f64) -> Result<LargeQReference> {
    if !(q.is_finite() && q > 0.0) {
        return Err(Error::Domain(format!("large-q series needs q > 0, got {q}")));
    }
    let r = 2.0 * q.sqrt() * R_SERIES.iter().map(|&(k, c)| c * q.powi(-k)).sum::<f64>();
    let rbar = RBAR_SERIES.iter().map(|&(k, c)| c * q.powi(k)).sum();
    Ok(LargeQReference {
        q,
        r_series: r,
        rbar_series: rbar,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arch::catalan;

    #[test]
    fn exact_geometric() {
        let s: Vec<BigUint> = (1..=20u32).map(|n| BigUint::from(2u32).pow(n)).collect();
        let f = fit_power_law(&s, 1).unwrap();
        assert!((f.r_estimate - 2.0).abs() < 1e-12);
        assert!(f.alpha_estimate.abs() < 1e-9);
    }

    #[test]
    fn catalan_squares_with_stride_two() {
        let s: Vec<BigUint> = (1..=60u64).map(|n| catalan(n).pow(2)).collect();
        let f = fit_power_law(&s, 2).unwrap();
        assert!((f.r_estimate - 4.0).abs() / 4.0 < 0.02, "{}", f.r_estimate);
        assert!((f.alpha_estimate - 3.0).abs() / 3.0 < 0.05, "{}", f.alpha_estimate);
    }

    #[test]
    fn catalan_numbers() {
        let s: Vec<BigUint> = (1..=60u64).map(catalan).collect();
        let f = fit_power_law(&s, 1).unwrap();
        assert!((f.r_estimate - 4.0).abs() < 0.02);
        assert!((f.alpha_estimate - 1.5).abs() < 0.02);
    }

    #[test]
    fn rational_terms() {
        let s: Vec<BigRational> = (1..=40u64)
            .map(|n| BigRational::new(catalan(n).into(), n.into()))
            .collect();
        let f = fit_power_law_rational(&s, 1).unwrap();
        assert!((f.r_estimate - 4.0).abs() < 0.02);
        assert!((f.alpha_estimate - 2.5).abs() < 0.05);
        assert!(fit_power_law_rational(&vec![BigRational::zero(); 8], 1).is_err());
    }

    #[test]
    fn huge_terms() {
        let s: Vec<BigUint> = (1..=12u64).map(|n| catalan(400 * n)).collect();
        assert!(ln_big(&s[11]).is_finite());
        let big = BigUint::from(3u32).pow(5000);
        assert!((ln_big(&big) - 5000.0 * 3f64.ln()).abs() < 1e-6);
    }

    #[test]
    fn rejects_bad_input() {
        let short: Vec<BigUint> = (1..=5u32).map(BigUint::from).collect();
        assert!(fit_power_law(&short, 1).is_err());
        let mut zero: Vec<BigUint> = (1..=8u32).map(BigUint::from).collect();
        zero[3] = BigUint::zero();
        assert!(matches!(fit_power_law(&zero, 1), Err(Error::Domain(_))));
    }

    #[test]
    fn large_q_values() {
        let r = large_q_reference(100.0).unwrap();
        assert!((r.r_series / 20.0 - 1.010_148_5).abs() < 1e-6);
        let r = large_q_reference(1000.0).unwrap();
        assert!((r.rbar_series - 1001.002).abs() < 1e-3);
        let r = large_q_reference(1e12).unwrap();
        assert!((r.r_series / (2.0 * 1e6) - 1.0).abs() < 1e-11);
        assert!(large_q_reference(0.0).is_err());
    }
}
