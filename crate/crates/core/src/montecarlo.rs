//! Seeded simulation of complete protocol runs under each attack.
//!
//! Every trial draws a fresh key and codeword, simulates the eavesdropper's
//! single-qubit measurements with Born-rule sampling and reports whether the
//! recovered parity equals the message. Trial `i` uses ChaCha8 stream `i` of
//! the master seed, so results do not depend on how trials are scheduled.

use std::f64::consts::TAU;

use rand::distributions::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bayes::{codeword_success, BayesAttack, MAX_BAYES_RESOLUTION};
use crate::error::{invalid, Result};
use crate::protocol::{encode_message, encrypt, generate_private_key, ProtocolParams, QubitAngle};
use crate::symmetry::average_success_symmetry;

/// How the symmetry-test attack picks the measurement basis for a pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PairBasis {
    /// Uniform on `[0, 2π)`.
    Uniform,
    /// Aligned with the public-key state (`ω = 0`); a diagnostic case.
    AlignedWithKey,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AttackKind {
    BayesProjective,
    SymmetryTest(PairBasis),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialConfig {
    pub params: ProtocolParams,
    pub attack: AttackKind,
    pub trials: u64,
    pub seed: u64,
}

impl TrialConfig {
    pub fn new(params: ProtocolParams, attack: AttackKind, trials: u64, seed: u64) -> Result<Self> {
        if trials == 0 {
            return Err(invalid("trials", "at least one trial is required"));
        }
        if attack == AttackKind::BayesProjective && params.n > MAX_BAYES_RESOLUTION {
            return Err(invalid("n", format!("must lie in 1..={MAX_BAYES_RESOLUTION}")));
        }
        Ok(Self {
            params,
            attack,
            trials,
            seed,
        })
    }
}

/// Empirical success frequency with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EstimateWithError {
    pub mean: f64,
    pub std_error: f64,
    pub trials: u64,
    pub successes: u64,
}

impl EstimateWithError {
    pub fn from_counts(successes: u64, trials: u64) -> Self {
        let mean = successes as f64 / trials as f64;
        Self {
            mean,
            std_error: (mean * (1.0 - mean) / trials as f64).sqrt(),
            trials,
            successes,
        }
    }

    /// `(mean - expected) / std_error`; zero when both the error and the
    /// deviation vanish.
    pub fn z_score(&self, expected: f64) -> f64 {
        let dev = self.mean - expected;
        if self.std_error > 0.0 {
            dev / self.std_error
        } else if dev.abs() < 1e-12 {
            0.0
        } else {
            f64::INFINITY.copysign(dev)
        }
    }
}

/// The generator for trial `index` under `seed`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Projective measurement of `q` in the basis whose "0" state sits at
/// `basis_angle`; returns 0 with probability `cos²((φ - basis)/2)`.
pub fn sample_measurement<R: Rng + ?Sized>(q: &QubitAngle, basis_angle: f64, rng: &mut R) -> u8 {
    let p0 = 0.5 * (1.0 + (q.radians() - basis_angle).cos());
    // Open01 never yields 0 or 1, so p0 = 1 and p0 = 0 are certain outcomes.
    let u: f64 = rng.sample(Open01);
    u8::from(u >= p0)
}

/// Per-outcome measurement directions for the Bayes attack, tabulated once.
#[derive(Debug, Clone)]
pub struct BayesTrialRunner {
    params: ProtocolParams,
    /// Indexed by `T0z (T+1) + T0x`; `None` where the estimate has no direction.
    angles: Vec<Option<f64>>,
}

impl BayesTrialRunner {
    pub fn new(params: ProtocolParams) -> Result<Self> {
        let t = params.copies_per_basis;
        let attack = BayesAttack::new(t, params.n)?;
        let width = t as usize + 1;
        let mut angles = vec![None; width * width];
        for (o, _, est) in attack.estimates() {
            angles[o.zeros_z as usize * width + o.zeros_x as usize] = est.angle();
        }
        Ok(Self { params, angles })
    }

    pub fn run<R: Rng + ?Sized>(&self, rng: &mut R) -> bool {
        let p = &self.params;
        let t = p.copies_per_basis;
        let width = t as usize + 1;
        let key = generate_private_key(p, rng);
        let m: bool = rng.gen();
        let codeword = encode_message(m, p.codeword_len, rng).expect("codeword length validated");
        let cipher = encrypt(&key, &codeword).expect("key covers codeword");

        let mut guess = false;
        for (j, c) in cipher.qubits().iter().enumerate() {
            let public = key.public_state(j);
            let zeros_z = (0..t).filter(|_| sample_measurement(&public, 0.0, rng) == 0).count();
            let zeros_x = (0..t)
                .filter(|_| sample_measurement(&public, std::f64::consts::FRAC_PI_2, rng) == 0)
                .count();
            let angle = self.angles[zeros_z * width + zeros_x].unwrap_or_else(|| rng.gen_range(0.0..TAU));
            guess ^= sample_measurement(c, angle, rng) == 1;
        }
        guess == m
    }
}

/// One protocol run under the Bayes attack. Builds the outcome table on
/// every call; [`estimate`] builds it once.
pub fn run_bayes_trial<R: Rng + ?Sized>(cfg: &TrialConfig, rng: &mut R) -> Result<bool> {
    Ok(BayesTrialRunner::new(cfg.params)?.run(rng))
}

/// One protocol run under the symmetry-test attack.
pub fn run_symmetry_trial<R: Rng + ?Sized>(params: &ProtocolParams, basis: PairBasis, rng: &mut R) -> bool {
    let key = generate_private_key(params, rng);
    let m: bool = rng.gen();
    let codeword = encode_message(m, params.codeword_len, rng).expect("codeword length validated");
    let cipher = encrypt(&key, &codeword).expect("key covers codeword");

    let mut guess = false;
    for (j, c) in cipher.qubits().iter().enumerate() {
        let public = key.public_state(j);
        let phi = match basis {
            PairBasis::Uniform => rng.gen_range(0.0..TAU),
            PairBasis::AlignedWithKey => public.radians(),
        };
        let a = sample_measurement(&public, phi, rng);
        let b = sample_measurement(c, phi, rng);
        // different outcomes mean "antiparallel", i.e. w_j = 1
        guess ^= a != b;
    }
    guess == m
}

/// Runs `cfg.trials` independent trials in parallel.
pub fn estimate(cfg: &TrialConfig) -> Result<EstimateWithError> {
    let successes: u64 = match cfg.attack {
        AttackKind::BayesProjective => {
            let runner = BayesTrialRunner::new(cfg.params)?;
            (0..cfg.trials)
                .into_par_iter()
                .map(|i| u64::from(runner.run(&mut trial_rng(cfg.seed, i))))
                .sum()
        }
        AttackKind::SymmetryTest(basis) => (0..cfg.trials)
            .into_par_iter()
            .map(|i| u64::from(run_symmetry_trial(&cfg.params, basis, &mut trial_rng(cfg.seed, i))))
            .sum(),
    };
    Ok(EstimateWithError::from_counts(successes, cfg.trials))
}

/// The semi-analytic success probability the simulation should reproduce.
pub fn analytic_success(cfg: &TrialConfig) -> Result<f64> {
    let p = &cfg.params;
    match cfg.attack {
        AttackKind::BayesProjective => {
            let bit = BayesAttack::new(p.copies_per_basis, p.n)?.mean_success();
            Ok(codeword_success(bit, p.codeword_len))
        }
        AttackKind::SymmetryTest(PairBasis::Uniform) => average_success_symmetry(p.codeword_len),
        AttackKind::SymmetryTest(PairBasis::AlignedWithKey) => Ok(1.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn deterministic_measurements() {
        let mut rng = trial_rng(1, 0);
        let zero = QubitAngle::exact(0, 3).unwrap();
        let q = QubitAngle::exact(3, 4).unwrap();
        for _ in 0..1000 {
            assert_eq!(sample_measurement(&zero, 0.0, &mut rng), 0);
            assert_eq!(sample_measurement(&q, q.radians() + PI, &mut rng), 1);
            assert_eq!(sample_measurement(&q, q.radians(), &mut rng), 0);
        }
    }

    #[test]
    fn measurement_frequency() {
        let mut rng = trial_rng(2, 0);
        let q = QubitAngle::from_radians(FRAC_PI_2);
        let draws = 100_000;
        let zeros = (0..draws).filter(|_| sample_measurement(&q, 0.0, &mut rng) == 0).count();
        let sigma = (0.25 / draws as f64).sqrt();
        assert!((zeros as f64 / draws as f64 - 0.5).abs() < 3.0 * sigma);
    }

    #[test]
    fn bayes_at_n1_always_succeeds() {
        let params = ProtocolParams::new(1, 3, 1, 3).unwrap();
        let cfg = TrialConfig::new(params, AttackKind::BayesProjective, 2000, 5).unwrap();
        let est = estimate(&cfg).unwrap();
        assert_eq!(est.mean, 1.0);
        assert_eq!(est.std_error, 0.0);
        assert_eq!(est.z_score(analytic_success(&cfg).unwrap()), 0.0);
        let mut rng = trial_rng(9, 9);
        assert!(run_bayes_trial(&cfg, &mut rng).unwrap());
    }

    #[test]
    fn aligned_symmetry_test_always_succeeds() {
        let params = ProtocolParams::new(6, 5, 1, 5).unwrap();
        let cfg = TrialConfig::new(params, AttackKind::SymmetryTest(PairBasis::AlignedWithKey), 5000, 3).unwrap();
        assert_eq!(estimate(&cfg).unwrap().mean, 1.0);
    }

    #[test]
    fn reproducible_and_shrinking_error() {
        let params = ProtocolParams::new(4, 2, 1, 2).unwrap();
        let attack = AttackKind::SymmetryTest(PairBasis::Uniform);
        let a = estimate(&TrialConfig::new(params, attack, 20_000, 11).unwrap()).unwrap();
        let b = estimate(&TrialConfig::new(params, attack, 20_000, 11).unwrap()).unwrap();
        assert_eq!(a, b);
        let c = estimate(&TrialConfig::new(params, attack, 40_000, 11).unwrap()).unwrap();
        let ratio = c.std_error / a.std_error;
        assert!((ratio - std::f64::consts::FRAC_1_SQRT_2).abs() < 0.02, "ratio {ratio}");
        let d = estimate(&TrialConfig::new(params, attack, 20_000, 12).unwrap()).unwrap();
        let pooled = (a.std_error.powi(2) + d.std_error.powi(2)).sqrt();
        assert!((a.mean - d.mean).abs() < 6.0 * pooled);
    }

    #[test]
    fn config_validation() {
        let params = ProtocolParams::new(20, 1, 1, 1).unwrap();
        assert!(TrialConfig::new(params, AttackKind::BayesProjective, 10, 0).is_err());
        assert!(TrialConfig::new(params, AttackKind::SymmetryTest(PairBasis::Uniform), 0, 0).is_err());
        assert!(TrialConfig::new(params, AttackKind::SymmetryTest(PairBasis::Uniform), 10, 0).is_ok());
    }
}
