use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use meandrics_core::algebra::{int, rat, rational_to_f64, LaurentN};
use meandrics_core::arch::catalan;
use meandrics_core::matrix_one::{
    finite_n_free_energy, planar_free_energy, planar_moments, planar_r_series, quartic_critical,
    string_equation_finite_n, univariate_coeffs, EvenPotential,
};
use meandrics_core::seqfit::fit_power_law_rational;
use meandrics_core::series::PowerSeries;
use meandrics_core::wick::{
    connected_free_energy, faces_and_genus, for_each_pairing, gaussian_average, PropagatorTable, StarSystem,
};
use meandrics_core::WorkLimit;

fn lim() -> WorkLimit {
    WorkLimit::default()
}

fn single(h: usize) -> LaurentN {
    gaussian_average(&StarSystem::single(vec![1; h]), &PropagatorTable::single(), &lim()).unwrap()
}

#[test]
fn planar_one_star_moments() {
    for p in 0..=5usize {
        let avg = single(2 * p);
        // Planar pairings have F = p + 1 faces and p edges.
        let top = if p == 0 { 0 } else { 1 };
        assert_eq!(avg.degree(), Some(top));
        assert_eq!(avg.coeff(top), BigRational::from_integer(catalan(p as u64).into()));
    }
    assert_eq!(single(4), LaurentN::from_terms([(1, int(2)), (-1, int(1))]));
}

#[test]
fn scalar_wick_counting() {
    let one = BigRational::from_integer(1.into());
    for h in (0..=10usize).step_by(2) {
        let stars = StarSystem::new(vec![vec![1; h]]);
        let avg = gaussian_average(&stars, &PropagatorTable::single(), &lim()).unwrap();
        let double_fact: i64 = (1..h as i64).step_by(2).product();
        let at_one = avg.eval(&one);
        assert_eq!(at_one, int(double_fact), "H = {h}");
    }
}

#[test]
fn euler_parity_of_pairings() {
    for h in (2..=8usize).step_by(2) {
        for split in 1..h {
            let s = StarSystem::new(vec![vec![1; split], vec![1; h - split]]);
            let mut checked = 0;
            for_each_pairing(h, &|_, _| true, &mut |p| {
                let fd = faces_and_genus(&s, p).unwrap();
                let e = h / 2;
                // V - E + F = Σ (2 - 2g) over components, which is even.
                let chi = s.stars.len() as i64 - e as i64 + fd.faces as i64;
                assert_eq!(chi.rem_euclid(2), 0);
                let genus_sum: usize = fd.components.iter().map(|c| c.genus).sum();
                assert_eq!(chi, 2 * fd.components.len() as i64 - 2 * genus_sum as i64);
                checked += 1;
            });
            assert!(checked > 0);
        }
    }
}

#[test]
fn quartic_free_energy_against_wick_at_small_n() {
    let wick = connected_free_energy(&[4], &PropagatorTable::single(), 2, &lim()).unwrap();
    for n in 1..=3u64 {
        let f = finite_n_free_energy(&EvenPotential::quartic(), n, 2).unwrap();
        let nn = int(n as i64);
        for k in 1..=2u32 {
            assert_eq!(f.coeff(&[k]), wick.coeff(&[k]).eval(&nn), "N = {n}, order {k}");
        }
    }
    let first = wick.coeff(&[1]);
    assert_eq!(first, LaurentN::from_terms([(2, rat(1, 2)), (0, rat(1, 4))]));
}

#[test]
fn hexic_free_energy_against_wick() {
    let wick = connected_free_energy(&[4, 6], &PropagatorTable::single(), 2, &lim()).unwrap();
    let pot = EvenPotential::new(vec![4, 6]).unwrap();
    for n in 1..=3u64 {
        let f = finite_n_free_energy(&pot, n, 2).unwrap();
        for (e, c) in wick.terms() {
            assert_eq!(f.coeff(e), c.eval(&int(n as i64)), "N = {n}, {e:?}");
        }
    }
}

#[test]
fn recursion_coefficients_approach_planar_limit() {
    let order = 2u32;
    let planar = planar_r_series(&EvenPotential::quartic(), order);
    for z in [rat(1, 4), rat(1, 2), int(1)] {
        let target = planar.at(&z);
        let mut last_err = f64::INFINITY;
        for n in [8u64, 16, 32] {
            let m = rational_to_f64(&(&z * int(n as i64))).floor() as usize;
            let r = string_equation_finite_n(&EvenPotential::quartic(), n, m, order).unwrap();
            let rm = &r[m - 1];
            let err: f64 = (0..=order)
                .map(|k| rational_to_f64(&(rm.coeff(&[k]) - target.coeff(&[k]))).abs())
                .sum();
            assert!(err < last_err || err == 0.0, "z = {z}, N = {n}: {err} vs {last_err}");
            last_err = err;
        }
        assert!(last_err < 0.5, "z = {z}: {last_err}");
    }
}

#[test]
fn gaussian_moments_are_catalan() {
    let free = EvenPotential::new(vec![]).unwrap();
    for p in 0..=8u32 {
        assert_eq!(
            planar_moments(&free, 2 * p, 1).constant_term(),
            BigRational::from_integer(catalan(p as u64).into())
        );
    }
}

#[test]
fn planar_free_energy_against_closed_form() {
    let order = 6;
    let f0 = univariate_coeffs(&planar_free_energy(&EvenPotential::quartic(), order as u32).unwrap());
    let root = PowerSeries::new(vec![int(1), int(-12)], order + 1).sqrt().unwrap();
    let a2 = (&PowerSeries::one(order + 1) - &root).shift_down(1).unwrap().scale(&rat(2, 3));
    let log_part = a2.scale(&rat(1, 4)).log().unwrap().scale(&rat(1, 2));
    let four = PowerSeries::constant(int(4), order);
    let thirty_six = PowerSeries::constant(int(36), order);
    let closed = &log_part + &(&(&a2 - &four) * &(&a2 - &thirty_six)).scale(&rat(1, 384));
    for k in 0..=order {
        assert_eq!(f0[k], *closed.coeff(k), "order {k}");
    }
}

#[test]
fn quartic_growth() {
    let qc = quartic_critical(30).unwrap();
    let fit = fit_power_law_rational(&qc.coefficients, 1).unwrap();
    assert!((fit.r_estimate - 12.0).abs() / 12.0 < 0.05, "{}", fit.r_estimate);
    assert!((fit.alpha_estimate - 3.5).abs() < 0.3, "{}", fit.alpha_estimate);
    let ratios = qc.ratios();
    assert!((ratios.last().unwrap() - 12.0).abs() < 1.5);
}

proptest! {
    #[test]
    fn one_matrix_averages_match_finite_n_moments(n in 1u64..6) {
        // <Tr M^2> = N^2 / N = N with the 1/N propagator; the recursion gives r_1 = 1/N.
        let avg = single(2).eval(&int(n as i64));
        let r = string_equation_finite_n(&EvenPotential::new(vec![]).unwrap(), n, 1, 0).unwrap();
        prop_assert_eq!(avg, int(n as i64));
        prop_assert_eq!(r[0].constant_term(), rat(1, n as i64));
    }

    #[test]
    fn planar_r_is_nonnegative(order in 1u32..6) {
        let r = planar_r_series(&EvenPotential::new(vec![4, 6]).unwrap(), order);
        for (_, c) in r.u().terms() {
            prop_assert!(*c > BigRational::zero());
        }
    }
}

#[test]
fn odd_words_vanish() {
    let avg = gaussian_average(&StarSystem::single(vec![1, 1, 1]), &PropagatorTable::single(), &lim()).unwrap();
    assert!(avg.is_zero());
}
