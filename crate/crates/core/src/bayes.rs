//! The incoherent projective-measurement attack.
//!
//! Eve measures `T` copies of a public-key qubit in the z basis and `T` in
//! the x basis, updates a uniform prior over `Z_(2^n)` with Bayes' rule,
//! estimates the Bloch vector from the posterior and measures the cipher
//! qubit along that estimate. Everything here is computed exactly by
//! summing over all `2^n` key values and all `(T+1)²` outcomes.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::numeric::{binomial, log_binomial, pairwise_sum, shannon_entropy};
use crate::parity::parity_iteration;
use crate::symspace::{mixture_density, SymmetricDensityOperator, MAX_COPIES};

/// Largest resolution exponent for the exact `2^n` sums.
pub const MAX_BAYES_RESOLUTION: u32 = 14;
/// Above this many measurements per basis, likelihoods are built in log space.
pub const LOG_SPACE_THRESHOLD: u32 = 30;
/// Estimated Bloch vectors shorter than this carry no direction; the
/// measurement along them is a fair coin.
pub const ZERO_NORM: f64 = 1e-12;

/// Measurement basis for the public-key copies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Basis {
    Z,
    X,
}

impl Basis {
    /// Bloch angle of the basis state `|0_b⟩`.
    pub fn angle(self) -> f64 {
        match self {
            Basis::Z => 0.0,
            Basis::X => FRAC_PI_2,
        }
    }
}

fn check_resolution(n: u32) -> Result<()> {
    if n == 0 || n > MAX_BAYES_RESOLUTION {
        return Err(invalid("n", format!("must lie in 1..={MAX_BAYES_RESOLUTION}")));
    }
    Ok(())
}

fn half_angle(k: u64, n: u32) -> f64 {
    // k θ_n / 2 = k π / 2^n
    k as f64 * (PI / (1u64 << n) as f64)
}

// cos²(Δ/2) written as (1 + cos Δ)/2, which is exactly 0 or 1 for
// (anti)parallel states.
fn prob_zero(basis: Basis, k: u64, n: u32) -> f64 {
    0.5 * (1.0 + (basis.angle() - key_angle(k, n)).cos())
}

/// Born probability of `outcome` (0 or 1) when measuring the state
/// `k θ_n` in `basis`.
pub fn outcome_prob_single(basis: Basis, outcome: u8, k: u64, n: u32) -> Result<f64> {
    check_resolution(n)?;
    if k >> n != 0 {
        return Err(Error::KeyOutOfRange { k, n });
    }
    let p0 = prob_zero(basis, k, n);
    match outcome {
        0 => Ok(p0),
        1 => Ok(1.0 - p0),
        _ => Err(invalid("outcome", "must be 0 or 1")),
    }
}

/// Counts of "0" outcomes in each basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MeasurementOutcome {
    pub zeros_z: u32,
    pub zeros_x: u32,
}

impl MeasurementOutcome {
    pub fn new(zeros_z: u32, zeros_x: u32) -> Self {
        Self { zeros_z, zeros_x }
    }
}

/// `B(T,a) p0^a (1-p0)^(T-a)`.
fn binomial_factor(p0: f64, t: u32, a: u32) -> f64 {
    if t <= LOG_SPACE_THRESHOLD {
        binomial(t as u64, a as u64) * p0.powi(a as i32) * (1.0 - p0).powi((t - a) as i32)
    } else {
        let p1 = 1.0 - p0;
        let mut log = log_binomial(t as u64, a as u64);
        if a > 0 {
            log += a as f64 * p0.ln();
        }
        if t > a {
            log += (t - a) as f64 * p1.ln();
        }
        log.exp()
    }
}

/// `q(T0z, T0x | k)`, product of the two binomial likelihoods.
pub fn likelihood(outcome: MeasurementOutcome, k: u64, t: u32, n: u32) -> Result<f64> {
    check_resolution(n)?;
    check_outcome(outcome, t)?;
    if k >> n != 0 {
        return Err(Error::KeyOutOfRange { k, n });
    }
    Ok(binomial_factor(prob_zero(Basis::Z, k, n), t, outcome.zeros_z)
        * binomial_factor(prob_zero(Basis::X, k, n), t, outcome.zeros_x))
}

fn check_outcome(outcome: MeasurementOutcome, t: u32) -> Result<()> {
    if outcome.zeros_z > t || outcome.zeros_x > t {
        return Err(invalid(
            "outcome",
            format!("counts ({}, {}) exceed T = {t}", outcome.zeros_z, outcome.zeros_x),
        ));
    }
    Ok(())
}

/// Posterior over `Z_(2^n)` after observing an outcome.
#[derive(Debug, Clone, Serialize)]
pub struct PosteriorDistribution {
    pub n: u32,
    pub t: u32,
    pub outcome: MeasurementOutcome,
    probs: Vec<f64>,
}

impl PosteriorDistribution {
    /// Builds a posterior from arbitrary weights; they are normalized.
    pub fn from_weights(n: u32, t: u32, outcome: MeasurementOutcome, weights: Vec<f64>) -> Result<Self> {
        check_resolution(n)?;
        if weights.len() != 1usize << n {
            return Err(Error::LengthMismatch {
                expected: 1usize << n,
                actual: weights.len(),
            });
        }
        if weights.iter().any(|&w| w.is_nan() || w < 0.0) {
            return Err(invalid("weights", "must be non-negative"));
        }
        let total = pairwise_sum(&weights);
        if total <= 0.0 {
            return Err(Error::ImpossibleOutcome {
                zeros_z: outcome.zeros_z,
                zeros_x: outcome.zeros_x,
            });
        }
        let probs = weights.into_iter().map(|w| w / total).collect();
        Ok(Self { n, t, outcome, probs })
    }

    /// Uniform prior; what Eve believes before measuring.
    pub fn uniform(n: u32) -> Result<Self> {
        check_resolution(n)?;
        let states = 1usize << n;
        Self::from_weights(n, 0, MeasurementOutcome::new(0, 0), vec![1.0; states])
    }

    /// Point mass at `k`.
    pub fn delta(n: u32, k: u64) -> Result<Self> {
        check_resolution(n)?;
        if k >> n != 0 {
            return Err(Error::KeyOutOfRange { k, n });
        }
        let mut w = vec![0.0; 1usize << n];
        w[k as usize] = 1.0;
        Self::from_weights(n, 0, MeasurementOutcome::new(0, 0), w)
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Shannon entropy in bits.
    pub fn entropy(&self) -> f64 {
        shannon_entropy(&self.probs)
    }
}

/// Estimated Bloch vector `R̃ = Σ p(k) (cos kθ, sin kθ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlochEstimate {
    pub z: f64,
    pub x: f64,
    pub norm: f64,
}

impl BlochEstimate {
    fn new(z: f64, x: f64) -> Self {
        Self {
            z,
            x,
            norm: z.hypot(x),
        }
    }

    /// Direction of the estimate on the x-z circle, or `None` if it has no
    /// usable direction.
    pub fn angle(&self) -> Option<f64> {
        (self.norm >= ZERO_NORM).then(|| self.x.atan2(self.z))
    }

    /// `½ + R̃·R / (2‖R̃‖)` for the true Bloch vector `R = (cos φ, sin φ)`.
    pub fn success_against(&self, phi: f64) -> f64 {
        if self.norm < ZERO_NORM {
            return 0.5;
        }
        let dot = self.z * phi.cos() + self.x * phi.sin();
        (0.5 + dot / (2.0 * self.norm)).clamp(0.0, 1.0)
    }
}

fn key_angle(k: u64, n: u32) -> f64 {
    2.0 * half_angle(k & ((1u64 << n) - 1), n)
}

pub fn bloch_estimate(post: &PosteriorDistribution) -> BlochEstimate {
    let n = post.n;
    let z: Vec<f64> = post
        .probs
        .iter()
        .enumerate()
        .map(|(k, p)| p * key_angle(k as u64, n).cos())
        .collect();
    let x: Vec<f64> = post
        .probs
        .iter()
        .enumerate()
        .map(|(k, p)| p * key_angle(k as u64, n).sin())
        .collect();
    BlochEstimate::new(pairwise_sum(&z), pairwise_sum(&x))
}

/// Probability of reading bit `w_j` correctly when the true key value is
/// `k` and Eve measures along the estimate from `post`.
pub fn success_given_outcome(k: u64, post: &PosteriorDistribution) -> f64 {
    bloch_estimate(post).success_against(key_angle(k, post.n))
}

/// The a posteriori state of `τ` copies.
pub fn posterior_density(tau: usize, post: &PosteriorDistribution) -> Result<SymmetricDensityOperator> {
    if tau == 0 || tau > MAX_COPIES {
        return Err(invalid("tau", format!("must lie in 1..={MAX_COPIES}")));
    }
    Ok(mixture_density(tau, post.n, &post.probs))
}

/// Precomputed likelihood tables for one `(T, n)`.
///
/// All attack quantities are sums over the `2^n` key values and the
/// `(T+1)²` outcomes; the per-basis binomial factors are tabulated once.
#[derive(Debug, Clone)]
pub struct BayesAttack {
    n: u32,
    t: u32,
    cos_k: Vec<f64>,
    sin_k: Vec<f64>,
    z_factor: Vec<f64>,
    x_factor: Vec<f64>,
}

impl BayesAttack {
    pub fn new(t: u32, n: u32) -> Result<Self> {
        check_resolution(n)?;
        let states = 1u64 << n;
        let width = t as usize + 1;
        let mut z_factor = Vec::with_capacity(states as usize * width);
        let mut x_factor = Vec::with_capacity(states as usize * width);
        let mut cos_k = Vec::with_capacity(states as usize);
        let mut sin_k = Vec::with_capacity(states as usize);
        for k in 0..states {
            let pz = prob_zero(Basis::Z, k, n);
            let px = prob_zero(Basis::X, k, n);
            for a in 0..=t {
                z_factor.push(binomial_factor(pz, t, a));
                x_factor.push(binomial_factor(px, t, a));
            }
            let phi = key_angle(k, n);
            cos_k.push(phi.cos());
            sin_k.push(phi.sin());
        }
        Ok(Self {
            n,
            t,
            cos_k,
            sin_k,
            z_factor,
            x_factor,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    fn states(&self) -> usize {
        1usize << self.n
    }

    /// All `(T+1)²` outcomes, z count major.
    pub fn outcomes(&self) -> impl Iterator<Item = MeasurementOutcome> {
        let t = self.t;
        (0..=t).flat_map(move |a| (0..=t).map(move |b| MeasurementOutcome::new(a, b)))
    }

    pub fn likelihood(&self, outcome: MeasurementOutcome, k: u64) -> f64 {
        let width = self.t as usize + 1;
        let k = k as usize;
        self.z_factor[k * width + outcome.zeros_z as usize]
            * self.x_factor[k * width + outcome.zeros_x as usize]
    }

    fn likelihoods(&self, outcome: MeasurementOutcome) -> Vec<f64> {
        (0..self.states() as u64).map(|k| self.likelihood(outcome, k)).collect()
    }

    /// Marginal probability `q(T0z, T0x)` under the uniform prior.
    pub fn evidence(&self, outcome: MeasurementOutcome) -> Result<f64> {
        check_outcome(outcome, self.t)?;
        Ok(pairwise_sum(&self.likelihoods(outcome)) / self.states() as f64)
    }

    pub fn posterior(&self, outcome: MeasurementOutcome) -> Result<PosteriorDistribution> {
        check_outcome(outcome, self.t)?;
        PosteriorDistribution::from_weights(self.n, self.t, outcome, self.likelihoods(outcome))
    }

    /// `I_av = n - Σ_o q(o) H[p(·|o)]` in bits.
    pub fn information_gain(&self) -> f64 {
        let mut terms = Vec::new();
        for o in self.outcomes() {
            let l = self.likelihoods(o);
            let total = pairwise_sum(&l);
            if total <= 0.0 {
                continue;
            }
            let q = total / self.states() as f64;
            let probs: Vec<f64> = l.iter().map(|x| x / total).collect();
            terms.push(q * shannon_entropy(&probs));
        }
        (self.n as f64 - pairwise_sum(&terms)).max(0.0)
    }

    /// Estimated Bloch vector for every outcome with non-zero evidence,
    /// paired with that evidence.
    pub fn estimates(&self) -> Vec<(MeasurementOutcome, f64, BlochEstimate)> {
        self.outcomes()
            .filter_map(|o| {
                let l = self.likelihoods(o);
                let total = pairwise_sum(&l);
                if total <= 0.0 {
                    return None;
                }
                let z: Vec<f64> = l.iter().zip(&self.cos_k).map(|(w, c)| w * c).collect();
                let x: Vec<f64> = l.iter().zip(&self.sin_k).map(|(w, s)| w * s).collect();
                let est = BlochEstimate::new(pairwise_sum(&z) / total, pairwise_sum(&x) / total);
                Some((o, total / self.states() as f64, est))
            })
            .collect()
    }

    /// `P(suc | w_j, k)` for every key value `k`.
    pub fn success_by_key(&self) -> Vec<f64> {
        let mut success = vec![0.0; self.states()];
        for (o, _, est) in self.estimates() {
            for (k, acc) in success.iter_mut().enumerate() {
                let l = self.likelihood(o, k as u64);
                if l == 0.0 {
                    continue;
                }
                *acc += l * est.success_against(key_angle(k as u64, self.n));
            }
        }
        success
    }

    pub fn success_given_key(&self, k: u64) -> Result<f64> {
        if k >> self.n != 0 {
            return Err(Error::KeyOutOfRange { k, n: self.n });
        }
        let mut acc = Vec::new();
        let phi = key_angle(k, self.n);
        for (o, _, est) in self.estimates() {
            let l = self.likelihood(o, k);
            if l > 0.0 {
                acc.push(l * est.success_against(phi));
            }
        }
        Ok(pairwise_sum(&acc))
    }

    /// Key-averaged single-bit success probability.
    pub fn mean_success(&self) -> f64 {
        pairwise_sum(&self.success_by_key()) / self.states() as f64
    }
}

pub fn evidence(outcome: MeasurementOutcome, t: u32, n: u32) -> Result<f64> {
    BayesAttack::new(t, n)?.evidence(outcome)
}

pub fn posterior(outcome: MeasurementOutcome, t: u32, n: u32) -> Result<PosteriorDistribution> {
    BayesAttack::new(t, n)?.posterior(outcome)
}

pub fn information_gain(t: u32, n: u32) -> Result<f64> {
    Ok(BayesAttack::new(t, n)?.information_gain())
}

/// Independent of the encrypted bit: the estimate basis does not depend on it.
pub fn success_given_key(k: u64, t: u32, n: u32) -> Result<f64> {
    BayesAttack::new(t, n)?.success_given_key(k)
}

pub fn mean_success(t: u32, n: u32) -> Result<f64> {
    Ok(BayesAttack::new(t, n)?.mean_success())
}

fn require_t_above_one(t: u32) -> Result<()> {
    if t <= 1 {
        return Err(invalid("T", "the bound is stated for T > 1"));
    }
    Ok(())
}

/// `U(T) = 1 - 1/(6T)`.
pub fn bound_u(t: u32) -> Result<f64> {
    require_t_above_one(t)?;
    Ok(1.0 - 1.0 / (6.0 * t as f64))
}

/// Success probability of the optimal collective estimate from `2T` copies,
/// `½ + 2^-(2T+1) Σ_{i<2T} sqrt(B(2T,i) B(2T,i+1))`.
pub fn optimal_collective(t: u32) -> Result<f64> {
    if t == 0 {
        return Err(invalid("T", "at least one measurement per basis is required"));
    }
    let m = 2 * t as u64;
    let sum = if m <= 60 {
        let terms: Vec<f64> = (0..m)
            .map(|i| (binomial(m, i) * binomial(m, i + 1)).sqrt())
            .collect();
        pairwise_sum(&terms) * 0.5f64.powi(m as i32 + 1)
    } else {
        let scale = (m + 1) as f64 * std::f64::consts::LN_2;
        let terms: Vec<f64> = (0..m)
            .map(|i| (0.5 * (log_binomial(m, i) + log_binomial(m, i + 1)) - scale).exp())
            .collect();
        pairwise_sum(&terms)
    };
    Ok(0.5 + sum)
}

/// Probability that the parity of `s` independently guessed bits is right.
pub fn codeword_success(p_bit: f64, s: usize) -> f64 {
    parity_iteration(p_bit, s)
}

/// `½ + ½ (1 - 1/(3T))^s`.
pub fn codeword_bound(t: u32, s: usize) -> Result<f64> {
    require_t_above_one(t)?;
    Ok(0.5 + 0.5 * (1.0 - 1.0 / (3.0 * t as f64)).powi(s as i32))
}

/// `|1 + log2 ε|` for `0 < ε <= ½`.
pub fn security_exponent(epsilon: f64) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon <= 0.5) {
        return Err(invalid("epsilon", format!("{epsilon} is outside (0, 1/2]")));
    }
    Ok((1.0 + epsilon.log2()).abs())
}

/// Minimum codeword lengths keeping the bound below `½ + ε`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CodewordLengths {
    /// From inverting the bound exactly.
    pub exact: u64,
    /// The simpler sufficient length `3T |1 + log2 ε|`.
    pub simple: u64,
}

pub fn required_codeword_length(epsilon: f64, t: u32) -> Result<CodewordLengths> {
    require_t_above_one(t)?;
    let l = security_exponent(epsilon)?;
    let t = t as f64;
    let rate = ((3.0 * t - 1.0) / (3.0 * t)).log2().abs();
    Ok(CodewordLengths {
        exact: (l / rate).ceil() as u64,
        simple: (3.0 * t * l).ceil() as u64,
    })
}
