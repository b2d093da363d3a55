//! Configuration exponents of meanders from the KPZ relation.
//!
//! Loop weights are parametrised as `q = 2cos(πf)` for roads and `p = 2cos(πe)`
//! for rivers, with `e, f` in `[0, 1/2]` for weights in `[0, 2]`.

use std::f64::consts::PI;

use serde::Serialize;
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};

const EDGE_TOL: f64 = 1e-12;

/// Below this `f` the multi-river radius uses its Taylor expansion.
const SMALL_F: f64 = 1e-4;

fn check_weight(name: &str, x: f64) -> Result<f64> {
    if !x.is_finite() || !(-EDGE_TOL..=2.0 + EDGE_TOL).contains(&x) {
        return Err(Error::Domain(format!("{name} = {x} outside [0, 2]")));
    }
    Ok(x.clamp(0.0, 2.0))
}

/// Rounding can push `c` a few ulps above 1 at `f = 0`.
fn check_charge(c: f64) -> Result<f64> {
    if !c.is_finite() || c > 1.0 + 1e-9 {
        return Err(Error::Domain(format!("central charge {c} > 1")));
    }
    Ok(c.min(1.0))
}

/// `f` with `x = 2cos(πf)` on the principal branch, in `[0, 1/2]` for `x` in `[0, 2]`.
pub fn electric_parameter(x: f64) -> f64 {
    if (x - 1.0).abs() < EDGE_TOL {
        return 1.0 / 3.0;
    }
    if x.abs() < EDGE_TOL {
        return 0.5;
    }
    (x / 2.0).clamp(-1.0, 1.0).acos() / PI
}

/// String susceptibility `γ = (c - 1 - √((25-c)(1-c)))/12`.
pub fn kpz_gamma(c: f64) -> Result<f64> {
    let c = check_charge(c)?;
    Ok((c - 1.0 - ((25.0 - c) * (1.0 - c)).sqrt()) / 12.0)
}

/// Gravitationally dressed dimension of a primary field of dimension `h`.
pub fn dressed_dimension(h: f64, c: f64) -> Result<f64> {
    let c = check_charge(c)?;
    let disc = 1.0 - c + 24.0 * h;
    if disc < -1e-12 {
        return Err(Error::Domain(format!("1 - c + 24h = {disc} < 0")));
    }
    let disc = disc.max(0.0);
    let a = (1.0 - c).sqrt();
    Ok((disc.sqrt() - a) / ((25.0 - c).sqrt() - a))
}

/// Central charge of the two-flavour fully packed loop model, `c(q, p)`.
pub fn central_charge(q: f64, p: f64) -> Result<f64> {
    let (q, p) = (check_weight("q", q)?, check_weight("p", p)?);
    let (e, f) = (electric_parameter(p), electric_parameter(q));
    Ok(fpl_charge(e, f))
}

fn fpl_charge(e: f64, f: f64) -> f64 {
    2.0 - 6.0 * (e * e / (1.0 - e) + f * f / (1.0 - f))
}

/// Central charge `1 - 6f²/(1-f)` of the dense O(n) model with `n = 2cos(πf)`.
pub fn o_n_charge(q: f64) -> Result<f64> {
    let f = electric_parameter(check_weight("q", q)?);
    Ok(1.0 - 6.0 * f * f / (1.0 - f))
}

/// Bulk dimension of the operator inserting a river endpoint.
fn endpoint_dimension(e: f64) -> f64 {
    (1.0 - 3.0 * e) * (1.0 + e) / (16.0 * (1.0 - e))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExponentRecord {
    pub q: f64,
    pub p: f64,
    pub e: f64,
    pub f: f64,
    pub c: f64,
    pub gamma: f64,
    pub alpha: f64,
    /// `None` where the dressed endpoint dimension is not real.
    pub alpha_bar: Option<f64>,
    pub h_1: f64,
    pub delta_1: Option<f64>,
    /// Multi-river radius, defined on the line `p = 1`.
    pub r_q1: Option<f64>,
    /// Set when `c > 1` and the exponents were taken at `c = 1`.
    pub c_clamped: bool,
}

/// All exponents at the point `(q, p)`.
pub fn exponent_point(q: f64, p: f64) -> Result<ExponentRecord> {
    let (q, p) = (check_weight("q", q)?, check_weight("p", p)?);
    let (e, f) = (electric_parameter(p), electric_parameter(q));
    let c = fpl_charge(e, f);
    let c_clamped = c > 1.0 + 1e-9;
    let ce = c.min(1.0);
    let root = (1.0 - ce).sqrt();
    let alpha = 2.0 + root * ((25.0 - ce).sqrt() + root) / 12.0;
    let h_1 = endpoint_dimension(e);
    let delta_1 = dressed_dimension(h_1, ce).ok();
    let alpha_bar = delta_1.map(|d| alpha - 1.0 + 2.0 * d);
    let r_q1 = if (p - 1.0).abs() < EDGE_TOL {
        Some(multi_river(q)?.r)
    } else {
        None
    };
    Ok(ExponentRecord {
        q,
        p,
        e,
        f,
        c,
        gamma: kpz_gamma(ce)?,
        alpha,
        alpha_bar,
        h_1,
        delta_1,
        r_q1,
        c_clamped,
    })
}

/// Exponents on the line `p = 0` in closed form. `alpha_bar` is `None` beyond
/// the winding transition.
pub fn p0_line(q: f64) -> Result<(f64, Option<f64>)> {
    let c = central_charge(q, 0.0)?;
    let (a, b) = ((1.0 - c).sqrt(), (25.0 - c).sqrt());
    let alpha = 2.0 + a * (b + a) / 12.0;
    let disc = -5.0 - 4.0 * c;
    let alpha_bar = (disc >= 0.0).then(|| 1.0 + disc.sqrt() * (b + a) / 24.0);
    Ok((alpha, alpha_bar))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MultiRiver {
    pub q: f64,
    pub f: f64,
    pub r: f64,
    pub alpha: f64,
    pub x: f64,
    pub gamma: f64,
}

/// Asymptotics of multi-river meanders with road weight `q` and river weight 1.
pub fn multi_river(q: f64) -> Result<MultiRiver> {
    let q = check_weight("q", q)?;
    let f = electric_parameter(q);
    let r = if f < SMALL_F {
        let t = PI * f;
        PI * PI / 2.0 * (1.0 - t * t / 12.0 + t.powi(4) / 360.0)
    } else {
        let s = (PI * f / 2.0).sin();
        2.0 * s * s / (f * f)
    };
    Ok(MultiRiver {
        q,
        f,
        r,
        alpha: (2.0 - f) / (1.0 - f),
        x: 1.0 / r,
        gamma: -f / (1.0 - f),
    })
}

/// Road weight beyond which winding dominates semi-meanders, where the O(n)
/// central charge equals 3/4.
pub fn winding_transition() -> f64 {
    2.0 * (PI * (97f64.sqrt() - 1.0) / 48.0).cos()
}

/// Entropy per triangle of the folded triangular lattice,
/// `log(√3 Γ(1/3)^{3/2} / (2π))`.
pub fn folding_entropy() -> f64 {
    (3f64.sqrt() / (2.0 * PI) * gamma(1.0 / 3.0).powf(1.5)).ln()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableTwoRow {
    pub q_exact: &'static str,
    pub f_exact: &'static str,
    pub q: f64,
    pub f: f64,
    pub r_q1: f64,
    pub r_q1_exact: &'static str,
    pub alpha_q1: f64,
    pub alpha_q1_exact: &'static str,
    /// One-river radius from extrapolated enumerations, not derived here.
    pub r_q_estimate: &'static str,
}

/// Multi-river asymptotics at `q ∈ {0, 1, √2, √3, 2}`.
pub fn table_two() -> Vec<TableTwoRow> {
    let rows: [(&str, &str, f64, &str, &str, &str); 5] = [
        ("0", "1/2", 0.0, "4", "3", "3.50"),
        ("1", "1/3", 1.0, "9/2", "5/2", "4"),
        ("sqrt(2)", "1/4", 2f64.sqrt(), "16-8*sqrt(2)", "7/3", "4.13"),
        ("sqrt(3)", "1/6", 3f64.sqrt(), "36-18*sqrt(3)", "11/5", "4.27"),
        ("2", "0", 2.0, "pi^2/2", "2", "4.42"),
    ];
    rows.iter()
        .map(|&(qs, fs, q, rs, als, est)| {
            let m = multi_river(q).expect("table points lie in [0, 2]");
            TableTwoRow {
                q_exact: qs,
                f_exact: fs,
                q,
                f: m.f,
                r_q1: m.r,
                r_q1_exact: rs,
                alpha_q1: m.alpha,
                alpha_q1_exact: als,
                r_q_estimate: est,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn kpz_values() {
        assert!(close(kpz_gamma(0.0).unwrap(), -0.5, 1e-15));
        assert!(close(kpz_gamma(1.0).unwrap(), 0.0, 1e-15));
        assert!(close(kpz_gamma(-4.0).unwrap(), (-5.0 - 145f64.sqrt()) / 12.0, 1e-14));
        assert!(close(kpz_gamma(-4.0).unwrap(), -1.42013, 1e-5));
        assert!(kpz_gamma(1.5).is_err());
    }

    #[test]
    fn dressed_dimension_values() {
        assert_eq!(dressed_dimension(0.0, -3.0).unwrap(), 0.0);
        assert!(close(dressed_dimension(1.0, 0.0).unwrap(), 1.0, 1e-15));
        let c1 = central_charge(2.0, 1.0).unwrap();
        let h = endpoint_dimension(1.0 / 3.0);
        assert!(close(h, 0.0, 1e-15));
        assert!(close(dressed_dimension(h, c1).unwrap(), 0.0, 1e-12));
        assert!(dressed_dimension(-1.0, 0.0).is_err());
    }

    #[test]
    fn meander_point() {
        let r = exponent_point(0.0, 0.0).unwrap();
        assert!(close(r.c, -4.0, 1e-12));
        let alpha = 2.0 + 5f64.sqrt() * (5f64.sqrt() + 29f64.sqrt()) / 12.0;
        let alpha_bar = 1.0 + 11f64.sqrt() * (5f64.sqrt() + 29f64.sqrt()) / 24.0;
        assert!(close(r.alpha, alpha, 1e-12));
        assert!(close(r.alpha_bar.unwrap(), alpha_bar, 1e-12));
        assert!(close(r.alpha, 3.420132, 1e-6));
        assert!(close(r.alpha_bar.unwrap(), 2.053198, 1e-6));
    }

    #[test]
    fn trivial_points() {
        let r = exponent_point(1.0, 1.0).unwrap();
        assert!(close(r.alpha, 2.5, 1e-12));
        assert!(close(r.alpha_bar.unwrap(), 1.5, 1e-12));
        let r = exponent_point(2.0, 2.0).unwrap();
        assert!(close(r.c, 2.0, 1e-12));
        assert!(r.c_clamped);
        assert!(close(r.alpha, 2.0, 1e-12));
        assert!(exponent_point(2.5, 1.0).is_err());
        assert!(exponent_point(2.0 + 1e-13, 1.0).is_ok());
    }

    #[test]
    fn multi_river_values() {
        let m = multi_river(1.0).unwrap();
        assert!(close(m.r, 4.5, 1e-12) && close(m.alpha, 2.5, 1e-12));
        let m = multi_river(0.0).unwrap();
        assert!(close(m.r, 4.0, 1e-12) && close(m.alpha, 3.0, 1e-12));
        let m = multi_river(2.0).unwrap();
        assert!(close(m.r, PI * PI / 2.0, 1e-12) && close(m.alpha, 2.0, 1e-12));
        assert!(close(m.gamma, 0.0, 1e-12));
    }

    #[test]
    fn small_f_branch_is_continuous() {
        let f = SMALL_F;
        let q = 2.0 * (PI * f).cos();
        let s = (PI * f / 2.0).sin();
        let direct = 2.0 * s * s / (f * f);
        let below = multi_river(2.0 * (PI * f * 0.999).cos()).unwrap().r;
        assert!(close(multi_river(q).unwrap().r, direct, 1e-9));
        assert!(close(below, direct, 1e-9));
    }

    #[test]
    fn table_rows() {
        let t = table_two();
        assert_eq!(t.len(), 5);
        let expect_r = [4.0, 4.5, 16.0 - 8.0 * 2f64.sqrt(), 36.0 - 18.0 * 3f64.sqrt(), PI * PI / 2.0];
        let expect_a = [3.0, 2.5, 7.0 / 3.0, 11.0 / 5.0, 2.0];
        for (row, (r, a)) in t.iter().zip(expect_r.iter().zip(expect_a)) {
            assert!(close(row.r_q1, *r, 1e-12), "{row:?}");
            assert!(close(row.alpha_q1, a, 1e-12), "{row:?}");
        }
    }

    #[test]
    fn alpha_paths_agree_on_p1_line() {
        for i in 0..20 {
            let q = 2.0 * i as f64 / 19.0;
            let a = exponent_point(q, 1.0).unwrap();
            let m = multi_river(q).unwrap();
            assert!(close(a.alpha, m.alpha, 1e-10), "q={q}");
            assert!(close(a.delta_1.unwrap(), 0.0, 1e-10));
            assert!(close(a.alpha_bar.unwrap(), a.alpha - 1.0, 1e-10));
        }
    }

    #[test]
    fn p0_line_matches_general_formula() {
        for q in [0.0, 1.0, 1.5] {
            let r = exponent_point(q, 0.0).unwrap();
            let (a, ab) = p0_line(q).unwrap();
            assert!(close(r.alpha, a, 1e-10));
            assert!(close(r.alpha_bar.unwrap(), ab.unwrap(), 1e-10));
            let c_on = o_n_charge(q).unwrap();
            assert!(close(r.c, c_on - 2.0, 1e-12));
        }
        assert!(p0_line(2.0).unwrap().1.is_none());
    }

    #[test]
    fn transition_point() {
        let qc = winding_transition();
        assert!(close(qc, 1.674, 1e-3));
        assert!(close(o_n_charge(qc).unwrap(), 0.75, 1e-10));
        assert!(qc > 1.5 && qc < 2.0);
    }

    #[test]
    fn folding_entropy_value() {
        assert!(close(folding_entropy(), 0.189_560_048_316_360, 1e-9));
    }
}
