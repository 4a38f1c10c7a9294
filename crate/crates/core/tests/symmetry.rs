mod common;

use std::f64::consts::{PI, TAU};

use proptest::prelude::*;
use qpke_core::symmetry::{
    average_success_symmetry, enumerate_pair_table, forward_search_length, forward_search_success, pair_fidelity,
    pair_success, parity_iteration,
};

use common::{brute_force_even_errors, periodic_mean};

#[test]
fn uniform_average_of_pair_success_is_three_quarters() {
    // 2F² - 2F + 1 is a degree-2 trigonometric polynomial in ω
    assert!((periodic_mean(16, pair_success) - 0.75).abs() < 1e-15);
    assert_eq!(average_success_symmetry(1).unwrap(), 0.75);
}

#[test]
fn multi_pair_average_by_quadrature() {
    // The s-pair success is the parity kernel applied to independent pairs,
    // so its ω-average factorizes into the single-pair average.
    for s in 1..=6 {
        let mut q = 1.0;
        let single = periodic_mean(16, pair_success);
        for _ in 0..s {
            q = single * q + (1.0 - single) * (1.0 - q);
        }
        assert!((q - average_success_symmetry(s).unwrap()).abs() < 1e-15);
    }
}

#[test]
fn forward_search_equivalence() {
    for s in 1..=64 {
        assert_eq!(forward_search_success(1, s).unwrap(), average_success_symmetry(s).unwrap());
    }
}

#[test]
fn iteration_matches_enumeration() {
    for s in 1..=12 {
        for q in [0.5, 0.6, 0.75, 0.9, 1.0] {
            let it = parity_iteration(q, s);
            assert!((it - brute_force_even_errors(q, s)).abs() <= 1e-12);
            assert!((it - (0.5 + 0.5 * (2.0 * q - 1.0).powi(s as i32))).abs() <= 1e-12);
        }
    }
}

#[test]
fn successful_rows_match_even_error_listing() {
    // public key / cipher state correctness for qubits 1, 2
    type Row = ([bool; 2], [bool; 2], [u8; 2], u8);
    let listed: [Row; 8] = [
        ([true, true], [true, true], [0, 0], 0),
        ([true, false], [true, false], [0, 2], 2),
        ([true, true], [false, false], [1, 1], 2),
        ([true, false], [false, true], [1, 1], 2),
        ([false, true], [true, false], [1, 1], 2),
        ([false, false], [true, true], [1, 1], 2),
        ([false, true], [false, true], [2, 0], 2),
        ([false, false], [false, false], [2, 2], 4),
    ];
    let rows = enumerate_pair_table();
    let successes: Vec<_> = rows.iter().filter(|r| r.success).collect();
    assert_eq!(successes.len(), listed.len());
    for (public, cipher, pair_errors, total) in listed {
        let row = rows
            .iter()
            .find(|r| r.public == public && r.cipher == cipher)
            .unwrap();
        assert_eq!(row.pair_errors, pair_errors);
        assert_eq!(row.total_errors, total);
        assert!(row.success);
    }
    for r in rows.iter().filter(|r| !r.success) {
        assert_eq!(r.total_errors % 2, 1);
    }
}

#[test]
fn success_formulas_decrease_in_s_and_increase_in_t() {
    for s in 1..40 {
        assert!(average_success_symmetry(s + 1).unwrap() < average_success_symmetry(s).unwrap());
        for t in 1..10 {
            let here = forward_search_success(t, s).unwrap();
            assert!(forward_search_success(t, s + 1).unwrap() < here);
            assert!(forward_search_success(t + 1, s).unwrap() > here);
        }
    }
}

#[test]
fn length_examples() {
    assert_eq!(forward_search_length(2f64.powi(-5), 2).unwrap(), 8);
    assert_eq!(forward_search_length(0.5, 2).unwrap(), 0);
}

proptest! {
    #[test]
    fn pair_success_symmetries(omega in 0.0f64..TAU) {
        let p = pair_success(omega);
        prop_assert!(p >= 0.5 - 1e-15);
        prop_assert!((p - pair_success(TAU - omega)).abs() < 1e-12);
        prop_assert!((p - pair_success(omega + PI)).abs() < 1e-12);
        let f = pair_fidelity(omega);
        if (f - 0.5).abs() > 1e-6 {
            prop_assert!(p > 0.5);
        }
    }
}
