//! Probability that an even number of independent per-bit errors occur.
//!
//! When a message is the parity of `s` bits and each bit is guessed correctly
//! with probability `q`, the parity guess is right exactly when the number of
//! wrong bits is even. Splitting off one bit gives the recursion
//! `Q(s) = q Q(s-1) + (1-q)(1-Q(s-1))`, whose solution is
//! `Q(s) = ½ + ½ (2q-1)^s`.

fn check_probability(q: f64) {
    assert!(
        (0.0..=1.0).contains(&q),
        "per-bit success probability {q} is outside [0, 1]"
    );
}

/// `Q(s)` by iterating the one-bit recursion; `Q(0) = 1`.
pub fn parity_iteration(q1: f64, s: usize) -> f64 {
    check_probability(q1);
    let mut q = 1.0;
    for _ in 0..s {
        q = q1 * q + (1.0 - q1) * (1.0 - q);
    }
    q
}

/// `½ + ½ (2 q1 - 1)^s`.
pub fn parity_closed_form(q1: f64, s: usize) -> f64 {
    check_probability(q1);
    0.5 + 0.5 * (2.0 * q1 - 1.0).powi(s as i32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn certain_bits_always_succeed() {
        for s in 0..20 {
            assert_eq!(parity_iteration(1.0, s), 1.0);
            assert_eq!(parity_closed_form(1.0, s), 1.0);
        }
    }

    #[test]
    fn iteration_matches_closed_form() {
        assert!((parity_iteration(0.9, 3) - 0.756).abs() < 1e-15);
        assert!((parity_closed_form(0.9, 3) - 0.756).abs() < 1e-15);
        assert_eq!(parity_iteration(0.5, 7), 0.5);
        // always-wrong bits: parity right iff s is even
        assert_eq!(parity_iteration(0.0, 4), 1.0);
        assert_eq!(parity_iteration(0.0, 5), 0.0);
    }

    #[test]
    #[should_panic]
    fn rejects_non_probability() {
        parity_iteration(1.5, 2);
    }
}
