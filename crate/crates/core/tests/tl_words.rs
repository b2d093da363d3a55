use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use proptest::prelude::*;

use meandrics_core::algebra::{int, rat};
use meandrics_core::meander::{meander_polynomial, semimeander_polynomial};
use meandrics_core::planar_words::{eta, gamma_word, meander_poly_via_words, semimeander_poly_via_words};
use meandrics_core::temperley_lieb::{
    chebyshev_u, meander_determinant_at, meander_determinant_direct, meander_determinant_formula,
    meander_determinant_formula_at,
};
use meandrics_core::WorkLimit;

fn lim() -> WorkLimit {
    WorkLimit::default()
}

#[test]
fn direct_determinant_equals_product_formula() {
    for n in 1..=5 {
        let direct = meander_determinant_direct(n, &lim()).unwrap();
        let formula = meander_determinant_formula(n).unwrap();
        assert_eq!(direct, formula, "n = {n}");
        assert_eq!(direct.degree(), formula.degree());
    }
}

#[test]
fn order_twelve_determinant_numerically() {
    for q in [int(2), int(3), int(-1), rat(1, 2)] {
        let direct = meander_determinant_at(6, &q, &lim()).unwrap();
        let formula = meander_determinant_formula_at(6, &q).unwrap();
        assert_eq!(direct, formula, "q = {q}");
    }
}

#[test]
fn chebyshev_at_algebraic_points() {
    let u = chebyshev_u(24);
    let period_one = [1, 1, 0, -1, -1, 0];
    let period_minus_one = [1, -1, 0, 1, -1, 0];
    let period_zero = [1, 0, -1, 0];
    for (m, um) in u.iter().enumerate() {
        let mi = m as i64;
        assert_eq!(um.eval(&int(2)), int(mi + 1));
        assert_eq!(um.eval(&int(-2)), int(if m % 2 == 0 { mi + 1 } else { -(mi + 1) }));
        assert_eq!(um.eval(&int(0)), int(period_zero[m % 4]));
        assert_eq!(um.eval(&int(1)), int(period_one[m % 6]));
        assert_eq!(um.eval(&int(-1)), int(period_minus_one[m % 6]));
    }
}

fn words(len: usize, q: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                (1..=q).map(move |c| {
                    let mut v = w.clone();
                    v.push(c);
                    v
                })
            })
            .collect();
    }
    out
}

#[test]
fn gamma_is_cyclic_exhaustively() {
    for len in (2..=10).step_by(2) {
        let all = words(len, 3);
        let table: HashMap<Vec<usize>, BigUint> = all.iter().map(|w| (w.clone(), gamma_word(w))).collect();
        for w in &all {
            let mut r = w.clone();
            r.rotate_left(1);
            assert_eq!(table[w], table[&r], "{w:?}");
        }
    }
}

proptest! {
    #[test]
    fn gamma_is_colour_blind(w in prop::collection::vec(1usize..=3, 0..=12), perm in Just([1usize, 2, 3]).prop_shuffle()) {
        let relabelled: Vec<usize> = w.iter().map(|&c| perm[c - 1]).collect();
        prop_assert_eq!(gamma_word(&w), gamma_word(&relabelled));
    }

    #[test]
    fn gamma_of_reversed_word(w in prop::collection::vec(1usize..=4, 0..=14)) {
        let mut r = w.clone();
        r.reverse();
        prop_assert_eq!(gamma_word(&w), gamma_word(&r));
    }
}

fn eta_u(n: usize) -> BigInt {
    BigInt::from(eta(n))
}

#[test]
fn four_block_identity() {
    for n1 in 0..=4 {
        for n2 in 0..=4 {
            for n3 in 0..=4 {
                for n4 in 0..=4 {
                    let mut w = vec![1; n1];
                    w.extend(vec![2; n2]);
                    w.extend(vec![1; n3]);
                    w.extend(vec![2; n4]);
                    let want = eta_u(n1 + n3) * eta_u(n2) * eta_u(n4) + eta_u(n2 + n4) * eta_u(n1) * eta_u(n3)
                        - eta_u(n1) * eta_u(n2) * eta_u(n3) * eta_u(n4);
                    assert_eq!(BigInt::from(gamma_word(&w)), want, "{n1} {n2} {n3} {n4}");
                }
            }
        }
    }
}

#[test]
fn word_sums_equal_arch_gluing() {
    for q in 1..=3usize {
        let qb = BigInt::from(q);
        for n in 1..=5 {
            let words = meander_poly_via_words(n, q, &lim()).unwrap();
            assert_eq!(BigInt::from(words), meander_polynomial(n, &lim()).unwrap().eval(&qb));
        }
        for n in 1..=6 {
            let words = semimeander_poly_via_words(n, q, &lim()).unwrap();
            assert_eq!(BigInt::from(words), semimeander_polynomial(n, &lim()).unwrap().eval(&qb));
        }
    }
}

#[test]
fn formula_values_are_rational_points() {
    // At q = 2 every U_m is positive, so the determinant is positive.
    for n in 1..=7 {
        let d = meander_determinant_formula_at(n, &int(2)).unwrap();
        assert!(d > BigRational::from_integer(0.into()));
    }
}
