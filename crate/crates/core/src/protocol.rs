//! Key generation, public-key qubit states, parity-codeword encryption and
//! legitimate decryption.
//!
//! Every public-key qubit lies on the x-z great circle of the Bloch sphere,
//! `cos(φ/2)|0_z⟩ + sin(φ/2)|1_z⟩`, with `φ = k θ_n` and `θ_n = π / 2^(n-1)`.
//! A codeword bit `w` is encrypted by rotating the qubit by `w π`, which in the
//! exact representation is the integer shift `k -> k + w 2^(n-1) (mod 2^n)`.

use std::f64::consts::{PI, TAU};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Largest resolution exponent for which `k θ_n` is carried exactly.
pub const MAX_RESOLUTION: u32 = 52;

/// The elementary rotation angle `π / 2^(n-1)`.
pub fn elementary_angle(n: u32) -> Result<f64> {
    if n == 0 {
        return Err(invalid("n", "resolution exponent must be at least 1"));
    }
    if n > MAX_RESOLUTION {
        return Err(invalid("n", format!("must be at most {MAX_RESOLUTION}")));
    }
    // Division by a power of two is exact.
    Ok(PI / (1u64 << (n - 1)) as f64)
}

/// Public parameters of one key pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProtocolParams {
    /// Angle-resolution exponent `n`; keys live in `Z_(2^n)`.
    pub n: u32,
    /// Public-key length `N` in qubits.
    pub key_len: usize,
    /// Measurements per basis `T` available to an eavesdropper (`2T` copies).
    pub copies_per_basis: u32,
    /// Codeword length `s`.
    pub codeword_len: usize,
}

impl ProtocolParams {
    pub fn new(n: u32, key_len: usize, copies_per_basis: u32, codeword_len: usize) -> Result<Self> {
        elementary_angle(n)?;
        if codeword_len == 0 {
            return Err(invalid("s", "codeword length must be at least 1"));
        }
        if key_len < codeword_len {
            return Err(invalid(
                "N",
                format!("key length {key_len} is shorter than codeword length {codeword_len}"),
            ));
        }
        if copies_per_basis == 0 {
            return Err(invalid("T", "at least one measurement per basis is required"));
        }
        Ok(Self {
            n,
            key_len,
            copies_per_basis,
            codeword_len,
        })
    }

    pub fn theta(&self) -> f64 {
        PI / (1u64 << (self.n - 1)) as f64
    }

    /// Number of distinct key values, `2^n`.
    pub fn key_space(&self) -> u64 {
        1u64 << self.n
    }

    /// Total public-key copies `T' = 2T + 1`, one of which carries the cipher.
    pub fn total_copies(&self) -> u32 {
        2 * self.copies_per_basis + 1
    }
}

/// A qubit on the x-z great circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum QubitAngle {
    /// Angle `k θ_n` with `0 <= k < 2^n`.
    Exact { k: u64, n: u32 },
    /// Angle in radians, reduced to `[0, 2π)`.
    Radians(f64),
}

impl QubitAngle {
    pub fn exact(k: u64, n: u32) -> Result<Self> {
        elementary_angle(n)?;
        if k >> n != 0 {
            return Err(Error::KeyOutOfRange { k, n });
        }
        Ok(QubitAngle::Exact { k, n })
    }

    pub fn from_radians(phi: f64) -> Self {
        let r = phi.rem_euclid(TAU);
        // rem_euclid can round up to exactly 2π
        QubitAngle::Radians(if r >= TAU { 0.0 } else { r })
    }

    pub fn radians(&self) -> f64 {
        match *self {
            QubitAngle::Exact { k, n } => k as f64 * (PI / (1u64 << (n - 1)) as f64),
            QubitAngle::Radians(phi) => phi,
        }
    }

    /// Bloch vector `(z, x)` = `(cos φ, sin φ)`.
    pub fn bloch(&self) -> (f64, f64) {
        let phi = self.radians();
        (phi.cos(), phi.sin())
    }

    /// Amplitudes on `|0_z⟩` and `|1_z⟩`.
    pub fn amplitudes(&self) -> (f64, f64) {
        let half = 0.5 * self.radians();
        (half.cos(), half.sin())
    }

    /// Rotation by `π`: the orthogonal state.
    pub fn flipped(&self) -> Self {
        match *self {
            QubitAngle::Exact { k, n } => {
                let mask = (1u64 << n) - 1;
                QubitAngle::Exact {
                    k: (k + (1u64 << (n - 1))) & mask,
                    n,
                }
            }
            QubitAngle::Radians(phi) => QubitAngle::from_radians(phi + PI),
        }
    }
}

/// The secret integers `k_1..k_N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrivateKey {
    n: u32,
    values: Vec<u64>,
}

impl PrivateKey {
    pub fn new(n: u32, values: Vec<u64>) -> Result<Self> {
        elementary_angle(n)?;
        if let Some(&k) = values.iter().find(|&&k| k >> n != 0) {
            return Err(Error::KeyOutOfRange { k, n });
        }
        Ok(Self { n, values })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// State of the `j`-th public-key qubit.
    pub fn public_state(&self, j: usize) -> QubitAngle {
        QubitAngle::Exact {
            k: self.values[j],
            n: self.n,
        }
    }

    /// The full public key, one qubit per key value.
    pub fn public_key(&self) -> Vec<QubitAngle> {
        (0..self.len()).map(|j| self.public_state(j)).collect()
    }
}

/// Draws `N` independent uniform values from `Z_(2^n)`.
pub fn generate_private_key<R: Rng + ?Sized>(params: &ProtocolParams, rng: &mut R) -> PrivateKey {
    let space = params.key_space();
    let values = (0..params.key_len).map(|_| rng.gen_range(0..space)).collect();
    PrivateKey {
        n: params.n,
        values,
    }
}

/// Public-key qubit prepared from key value `k`.
pub fn public_qubit_state(k: u64, n: u32) -> Result<QubitAngle> {
    QubitAngle::exact(k, n)
}

/// Encrypts one codeword bit: identity for `0`, rotation by `π` for `1`.
pub fn encrypt_bit(q: QubitAngle, w: bool) -> QubitAngle {
    if w {
        q.flipped()
    } else {
        q
    }
}

/// An `s`-bit codeword whose parity is the message bit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Codeword {
    bits: Vec<bool>,
}

impl Codeword {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn parity(&self) -> bool {
        parity(&self.bits)
    }
}

pub(crate) fn parity(bits: &[bool]) -> bool {
    bits.iter().fold(false, |acc, &b| acc ^ b)
}

/// Draws a codeword uniformly from the `2^(s-1)` codewords of parity `m`.
pub fn encode_message<R: Rng + ?Sized>(m: bool, s: usize, rng: &mut R) -> Result<Codeword> {
    if s == 0 {
        return Err(invalid("s", "codeword length must be at least 1"));
    }
    let mut bits: Vec<bool> = (0..s - 1).map(|_| rng.gen()).collect();
    // The free bits are uniform, so fixing the last one is a uniform draw
    // over the parity class.
    let last = parity(&bits) ^ m;
    bits.push(last);
    Ok(Codeword { bits })
}

/// The encrypted qubits, one per codeword bit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CipherState {
    qubits: Vec<QubitAngle>,
}

impl CipherState {
    pub fn new(qubits: Vec<QubitAngle>) -> Self {
        Self { qubits }
    }

    pub fn qubits(&self) -> &[QubitAngle] {
        &self.qubits
    }

    pub fn len(&self) -> usize {
        self.qubits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.qubits.is_empty()
    }
}

/// Encrypts `codeword` on the first `s` public-key qubits.
pub fn encrypt(key: &PrivateKey, codeword: &Codeword) -> Result<CipherState> {
    if codeword.len() > key.len() {
        return Err(Error::LengthMismatch {
            expected: key.len(),
            actual: codeword.len(),
        });
    }
    let qubits = codeword
        .bits
        .iter()
        .enumerate()
        .map(|(j, &w)| encrypt_bit(key.public_state(j), w))
        .collect();
    Ok(CipherState { qubits })
}

/// Result of a legitimate decryption.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decryption {
    pub bits: Vec<bool>,
    pub message: bool,
}

/// Measures each cipher qubit in the basis `{k_j θ_n, k_j θ_n + π}`.
///
/// States produced by [`encrypt`] are eigenstates of that basis, so the
/// outcome is deterministic. A qubit that was moved off the two basis states
/// decodes to whichever basis state is nearer.
pub fn decrypt(cipher: &CipherState, key: &PrivateKey) -> Result<Decryption> {
    if cipher.len() > key.len() {
        return Err(Error::LengthMismatch {
            expected: key.len(),
            actual: cipher.len(),
        });
    }
    let mut bits = Vec::with_capacity(cipher.len());
    for (j, q) in cipher.qubits.iter().enumerate() {
        let k = key.values[j];
        let bit = match *q {
            QubitAngle::Exact { k: kc, n } => {
                if n != key.n {
                    return Err(Error::ResolutionMismatch { key: key.n, state: n });
                }
                let mask = (1u64 << n) - 1;
                let diff = kc.wrapping_sub(k) & mask;
                let half = 1u64 << (n - 1);
                match diff {
                    0 => false,
                    d if d == half => true,
                    d => nearer_is_flipped(d as f64 * (PI / half as f64)),
                }
            }
            QubitAngle::Radians(phi) => nearer_is_flipped(phi - key.public_state(j).radians()),
        };
        bits.push(bit);
    }
    let message = parity(&bits);
    Ok(Decryption { bits, message })
}

fn nearer_is_flipped(delta: f64) -> bool {
    delta.cos() < 0.0
}
