//! The single-copy symmetry-test attack and the forward-search closed forms.
//!
//! Eve pairs the `j`-th public-key qubit with the `j`-th cipher qubit and
//! measures both in one randomly rotated basis at angle `φ_j`. With
//! `ω = k_j θ_n - φ_j`, each single measurement is "correct" (lands on the
//! basis state nearer the true state) with probability `F = cos²(ω/2)`. The
//! pair verdict "parallel/antiparallel" is right when the pair has an even
//! number of wrong outcomes, and the message parity is right when the total
//! over all pairs is even.

use serde::Serialize;

use crate::bayes::security_exponent;
use crate::error::{invalid, Result};
use crate::parity::parity_closed_form;

/// `F(ω) = cos²(ω/2)`.
pub fn pair_fidelity(omega: f64) -> f64 {
    0.5 * (1.0 + omega.cos())
}

/// `F² + (1-F)²`: both outcomes right or both wrong.
pub fn pair_success(omega: f64) -> f64 {
    let f = pair_fidelity(omega);
    f * f + (1.0 - f) * (1.0 - f)
}

/// Average over uniform `ω` and `s` pairs, `½ + 2^-(s+1)`.
///
/// A single pair averages to `3/4`, so this is the parity kernel at `3/4`.
pub fn average_success_symmetry(s: usize) -> Result<f64> {
    if s == 0 {
        return Err(invalid("s", "codeword length must be at least 1"));
    }
    Ok(parity_closed_form(0.75, s))
}

/// Forward-search success with `2T` copies, `½ + ½ (1 - 1/(2T))^s`.
pub fn forward_search_success(t: u32, s: usize) -> Result<f64> {
    if t == 0 {
        return Err(invalid("T", "at least one measurement per basis is required"));
    }
    if s == 0 {
        return Err(invalid("s", "codeword length must be at least 1"));
    }
    Ok(0.5 + 0.5 * (1.0 - 1.0 / (2.0 * t as f64)).powi(s as i32))
}

/// Codeword length needed against the forward search, `⌈T |1 + log2 ε|⌉`.
pub fn forward_search_length(epsilon: f64, t: u32) -> Result<u64> {
    if t == 0 {
        return Err(invalid("T", "at least one measurement per basis is required"));
    }
    Ok((t as f64 * security_exponent(epsilon)?).ceil() as u64)
}

/// Number of wrong single-qubit outcomes within one pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PairOutcome(u8);

impl PairOutcome {
    pub fn from_correctness(public_correct: bool, cipher_correct: bool) -> Self {
        PairOutcome(u8::from(!public_correct) + u8::from(!cipher_correct))
    }

    pub fn errors(self) -> u8 {
        self.0
    }

    /// The parallel/antiparallel verdict is right iff the error count is even.
    pub fn verdict_correct(self) -> bool {
        self.0.is_multiple_of(2)
    }
}

/// One combination of true/false outcomes for a two-bit codeword.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PairTableRow {
    /// Correctness of the outcomes on public-key qubits 1 and 2.
    pub public: [bool; 2],
    /// Correctness of the outcomes on cipher qubits 1 and 2.
    pub cipher: [bool; 2],
    pub pair_errors: [u8; 2],
    pub total_errors: u8,
    pub success: bool,
}

/// All 16 true/false combinations for `s = 2`.
pub fn enumerate_pair_table() -> Vec<PairTableRow> {
    let mut rows = Vec::with_capacity(16);
    for bits in 0u8..16 {
        // bit set = false outcome; order public1, public2, cipher1, cipher2
        let correct = |i: u8| bits & (8 >> i) == 0;
        let public = [correct(0), correct(1)];
        let cipher = [correct(2), correct(3)];
        let pairs = [
            PairOutcome::from_correctness(public[0], cipher[0]),
            PairOutcome::from_correctness(public[1], cipher[1]),
        ];
        let total = pairs[0].errors() + pairs[1].errors();
        rows.push(PairTableRow {
            public,
            cipher,
            pair_errors: [pairs[0].errors(), pairs[1].errors()],
            total_errors: total,
            success: total.is_multiple_of(2),
        });
    }
    rows
}

pub use crate::parity::parity_iteration;
