//! Density operators of `τ` identical public-key copies.
//!
//! `τ` copies of a qubit on the x-z circle live in the `(τ+1)`-dimensional
//! permutation-symmetric subspace spanned by the Hamming-weight states
//! `|l⟩`. In that basis the copy state at angle `φ` has amplitudes
//! `sqrt(B(τ,l)) cos(φ/2)^(τ-l) sin(φ/2)^l`, all real, so every operator here
//! is a real symmetric `(τ+1) x (τ+1)` matrix.

use std::f64::consts::{E, PI};

use serde::{Deserialize, Serialize};

use crate::eigen::jacobi_eigen;
use crate::error::{invalid, Error, Result};
use crate::numeric::{binomial, entropy_term, PairwiseAccumulator};

/// Largest number of copies supported.
pub const MAX_COPIES: usize = 64;
/// Largest resolution exponent for exact summation over the key space.
pub const MAX_PRIOR_RESOLUTION: u32 = 20;
/// Relative eigenvalue threshold for the numerical rank.
pub const RANK_THRESHOLD: f64 = 1e-10;
/// Default guard for the one-way condition, in bits.
pub const DEFAULT_ONE_WAY_GUARD: f64 = 4.0;
/// Default elementwise tolerance for detecting the critical resolution.
pub const DEFAULT_CRITICAL_TOLERANCE: f64 = 1e-12;

const SYMMETRY_TOL: f64 = 1e-14;
const TRACE_TOL: f64 = 1e-12;
const PSD_TOL: f64 = 1e-10;

/// `cos(φ/2)^(τ-l) sin(φ/2)^l`.
pub fn coefficient_f(tau: usize, l: usize, angle: f64) -> f64 {
    assert!(l <= tau, "Hamming weight {l} exceeds {tau} copies");
    let half = 0.5 * angle;
    half.cos().powi((tau - l) as i32) * half.sin().powi(l as i32)
}

/// A real symmetric density operator in the Hamming-weight basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetricDensityOperator {
    tau: usize,
    data: Vec<f64>,
}

impl SymmetricDensityOperator {
    /// Builds an operator from rows, checking symmetry, unit trace and
    /// positivity.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let dim = rows.len();
        if dim < 2 {
            return Err(Error::InvalidDensity("need at least one copy".into()));
        }
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidDensity("matrix is not square".into()));
        }
        let rho = Self {
            tau: dim - 1,
            data: rows.into_iter().flatten().collect(),
        };
        rho.validate()?;
        Ok(rho)
    }

    /// Projector onto `τ` copies of the qubit at `angle`.
    pub fn pure_state(tau: usize, angle: f64) -> Self {
        let amps = copy_amplitudes(tau, angle);
        let dim = tau + 1;
        let mut data = vec![0.0; dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                data[i * dim + j] = amps[i] * amps[j];
            }
        }
        Self { tau, data }
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    pub fn dim(&self) -> usize {
        self.tau + 1
    }

    pub fn get(&self, l: usize, lp: usize) -> f64 {
        self.data[l * self.dim() + lp]
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.get(i, i)).sum()
    }

    pub fn max_asymmetry(&self) -> f64 {
        let dim = self.dim();
        let mut worst = 0.0f64;
        for i in 0..dim {
            for j in (i + 1)..dim {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    /// Largest `|C_{l,l'}|` over entries with `l + l'` odd.
    pub fn max_odd_parity_entry(&self) -> f64 {
        let dim = self.dim();
        let mut worst = 0.0f64;
        for i in 0..dim {
            for j in 0..dim {
                if (i + j) % 2 == 1 {
                    worst = worst.max(self.get(i, j).abs());
                }
            }
        }
        worst
    }

    /// Largest elementwise difference to another operator of the same size.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.tau, other.tau, "operators act on different spaces");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Checks symmetry, trace and positive semidefiniteness.
    pub fn validate(&self) -> Result<()> {
        let asym = self.max_asymmetry();
        if asym > SYMMETRY_TOL {
            return Err(Error::InvalidDensity(format!("asymmetry {asym:e}")));
        }
        let trace = self.trace();
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidDensity(format!("trace {trace}")));
        }
        let spectrum = eigendecompose(self)?;
        let min = spectrum.min_eigenvalue();
        if min < -PSD_TOL {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {min:e}")));
        }
        Ok(())
    }
}

/// Amplitudes of `|ψ(angle)⟩^{⊗τ}` on the Hamming-weight states.
pub fn copy_amplitudes(tau: usize, angle: f64) -> Vec<f64> {
    let half = 0.5 * angle;
    amplitudes_from_half_angle(tau, half.cos(), half.sin(), &sqrt_binomials(tau))
}

fn sqrt_binomials(tau: usize) -> Vec<f64> {
    (0..=tau)
        .map(|l| binomial(tau as u64, l as u64).sqrt())
        .collect()
}

fn amplitudes_from_half_angle(tau: usize, c: f64, s: f64, sqrt_binom: &[f64]) -> Vec<f64> {
    let mut cpow = vec![1.0; tau + 1];
    let mut spow = vec![1.0; tau + 1];
    for i in 1..=tau {
        cpow[i] = cpow[i - 1] * c;
        spow[i] = spow[i - 1] * s;
    }
    (0..=tau)
        .map(|l| sqrt_binom[l] * cpow[tau - l] * spow[l])
        .collect()
}

fn check_tau(tau: usize) -> Result<()> {
    if tau == 0 || tau > MAX_COPIES {
        return Err(invalid("tau", format!("must lie in 1..={MAX_COPIES}")));
    }
    Ok(())
}

/// `Σ_k w_k |Φ_k⟩⟨Φ_k|` over the states at angles `k θ_n`, `k ∈ Z_(2^n)`.
///
/// Summation over `k` uses tree accumulation in blocks of 16 states.
pub(crate) fn mixture_density(tau: usize, n: u32, weights: &[f64]) -> SymmetricDensityOperator {
    const BLOCK: usize = 16;
    let dim = tau + 1;
    let states = 1usize << n;
    debug_assert_eq!(weights.len(), states);
    let sqrt_binom = sqrt_binomials(tau);
    let half_step = PI / states as f64;

    let mut acc = PairwiseAccumulator::new(dim * dim);
    for start in (0..states).step_by(BLOCK) {
        let mut block = vec![0.0; dim * dim];
        for (k, &w) in weights.iter().enumerate().skip(start).take(BLOCK) {
            if w == 0.0 {
                continue;
            }
            let half = k as f64 * half_step;
            let amps = amplitudes_from_half_angle(tau, half.cos(), half.sin(), &sqrt_binom);
            for i in 0..dim {
                let wi = w * amps[i];
                for j in i..dim {
                    block[i * dim + j] += wi * amps[j];
                }
            }
        }
        acc.push(block);
    }
    let mut data = acc.finish();
    for i in 0..dim {
        for j in 0..i {
            data[i * dim + j] = data[j * dim + i];
        }
    }
    SymmetricDensityOperator { tau, data }
}

/// The a priori state of `τ` copies of one public-key qubit, uniformly
/// averaged over `Z_(2^n)`.
pub fn prior_density(tau: usize, n: u32) -> Result<SymmetricDensityOperator> {
    check_tau(tau)?;
    if n == 0 || n > MAX_PRIOR_RESOLUTION {
        return Err(invalid("n", format!("must lie in 1..={MAX_PRIOR_RESOLUTION}")));
    }
    let states = 1usize << n;
    let weights = vec![1.0 / states as f64; states];
    Ok(mixture_density(tau, n, &weights))
}

/// Eigenvalues (descending) and numerical rank of a density operator.
#[derive(Debug, Clone, Serialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    #[serde(skip)]
    pub eigenvectors: Vec<Vec<f64>>,
    pub rank: usize,
}

impl Spectrum {
    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    /// Shannon entropy of the eigenvalues; tiny negative round-off counts
    /// as zero.
    pub fn entropy(&self) -> f64 {
        self.eigenvalues.iter().map(|&l| entropy_term(l.max(0.0))).sum()
    }
}

/// Full spectrum by cyclic Jacobi rotations.
pub fn eigendecompose(rho: &SymmetricDensityOperator) -> Result<Spectrum> {
    let e = jacobi_eigen(rho.as_slice(), rho.dim())?;
    let lmax = e.values.first().copied().unwrap_or(0.0);
    let rank = e
        .values
        .iter()
        .filter(|&&l| l > RANK_THRESHOLD * lmax)
        .count();
    Ok(Spectrum {
        eigenvalues: e.values,
        eigenvectors: e.vectors,
        rank,
    })
}

/// `S[ρ] = -Σ λ log2 λ` in bits.
pub fn von_neumann_entropy(rho: &SymmetricDensityOperator) -> Result<f64> {
    Ok(eigendecompose(rho)?.entropy())
}

/// `log2(τ+1)`: one copy of a `(τ+1)`-level system.
pub fn holevo_bound_loose(tau: usize) -> f64 {
    ((tau + 1) as f64).log2()
}

/// Gaussian bound on the entropy of the binomial spectrum,
/// `½ log2 τ + ½ log2(πe/2)`.
pub fn holevo_bound_tight(tau: usize) -> f64 {
    0.5 * (tau as f64).log2() + 0.5 * (PI * E / 2.0).log2()
}

/// Outcome of the one-way test `n >= log2(τ+1) + guard`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OneWayCheck {
    /// `n - log2(τ+1)` in bits.
    pub margin: f64,
    pub holds: bool,
}

pub fn one_way_condition(n: u32, tau: usize) -> OneWayCheck {
    one_way_condition_with_guard(n, tau, DEFAULT_ONE_WAY_GUARD)
}

pub fn one_way_condition_with_guard(n: u32, tau: usize, guard: f64) -> OneWayCheck {
    let margin = n as f64 - holevo_bound_loose(tau);
    OneWayCheck {
        margin,
        holds: margin >= guard,
    }
}

/// Detected critical resolution for a copy count.
#[derive(Debug, Clone, Serialize)]
pub struct CriticalResolution {
    pub tau: usize,
    /// Smallest `n` with `ρ(τ,n) ≈ ρ(τ,n+1)`; `None` if not found below the
    /// supported range.
    pub n_c: Option<u32>,
    /// Numerical rank at `n_c`.
    pub rank: Option<usize>,
}

impl CriticalResolution {
    pub fn full_rank(&self) -> bool {
        self.rank == Some(self.tau + 1)
    }
}

/// Searches for the smallest `n` beyond which the prior stops depending on
/// `n`, comparing consecutive resolutions elementwise.
pub fn critical_n(tau: usize, tol: f64) -> Result<CriticalResolution> {
    check_tau(tau)?;
    let mut current = prior_density(tau, 1)?;
    for n in 1..MAX_PRIOR_RESOLUTION {
        let next = prior_density(tau, n + 1)?;
        if current.max_abs_diff(&next) < tol {
            let rank = eigendecompose(&current)?.rank;
            return Ok(CriticalResolution {
                tau,
                n_c: Some(n),
                rank: Some(rank),
            });
        }
        current = next;
    }
    Ok(CriticalResolution {
        tau,
        n_c: None,
        rank: None,
    })
}

/// `B(τ,i) / 2^τ`, descending-sorted.
pub fn binomial_spectrum(tau: usize) -> Vec<f64> {
    let scale = 0.5f64.powi(tau as i32);
    let mut v: Vec<f64> = (0..=tau)
        .map(|i| binomial(tau as u64, i as u64) * scale)
        .collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficient_examples() {
        assert_eq!(coefficient_f(2, 0, 0.0), 1.0);
        assert!((coefficient_f(2, 1, PI / 2.0) - 0.5).abs() < 1e-15);
        assert!((coefficient_f(3, 3, PI) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn single_copy_prior_is_maximally_mixed() {
        for n in 1..=8 {
            let rho = prior_density(1, n).unwrap();
            assert!((rho.get(0, 0) - 0.5).abs() < 1e-15);
            assert!((rho.get(1, 1) - 0.5).abs() < 1e-15);
            assert!(rho.get(0, 1).abs() < 1e-15);
        }
    }

    #[test]
    fn two_copy_prior_matches_hand_sum() {
        // n = 2: angles 0, π/2, π, 3π/2. Amplitudes (c², √2 cs, s²) with
        // half angles 0, π/4, π/2, 3π/4.
        let rho = prior_density(2, 2).unwrap();
        let want = [
            [3.0 / 8.0, 0.0, 1.0 / 8.0],
            [0.0, 1.0 / 4.0, 0.0],
            [1.0 / 8.0, 0.0, 3.0 / 8.0],
        ];
        for (i, row) in want.iter().enumerate() {
            for (j, w) in row.iter().enumerate() {
                assert!((rho.get(i, j) - w).abs() < 1e-15, "({i},{j})");
            }
        }
    }

    #[test]
    fn prior_range_checks() {
        assert!(prior_density(0, 3).is_err());
        assert!(prior_density(65, 3).is_err());
        assert!(prior_density(2, 0).is_err());
        assert!(prior_density(2, 21).is_err());
    }

    #[test]
    fn spectra_of_simple_states() {
        let half = SymmetricDensityOperator::from_rows(vec![vec![0.5, 0.0], vec![0.0, 0.5]]).unwrap();
        let s = eigendecompose(&half).unwrap();
        assert_eq!(s.eigenvalues, vec![0.5, 0.5]);
        assert_eq!(s.rank, 2);
        assert_eq!(von_neumann_entropy(&half).unwrap(), 1.0);

        let pure = SymmetricDensityOperator::pure_state(4, 1.234);
        let s = eigendecompose(&pure).unwrap();
        assert!((s.eigenvalues[0] - 1.0).abs() < 1e-12);
        assert!(s.eigenvalues[1..].iter().all(|l| l.abs() < 1e-12));
        assert_eq!(s.rank, 1);
        assert!(von_neumann_entropy(&pure).unwrap().abs() < 1e-10);
    }

    #[test]
    fn from_rows_rejects_bad_input() {
        assert!(SymmetricDensityOperator::from_rows(vec![vec![1.0]]).is_err());
        assert!(SymmetricDensityOperator::from_rows(vec![vec![0.5, 0.1], vec![0.0, 0.5]]).is_err());
        assert!(SymmetricDensityOperator::from_rows(vec![vec![0.6, 0.0], vec![0.0, 0.6]]).is_err());
        assert!(SymmetricDensityOperator::from_rows(vec![vec![1.5, 0.0], vec![0.0, -0.5]]).is_err());
    }

    #[test]
    fn binomial_entropy_for_two_copies() {
        let rho = prior_density(2, 4).unwrap();
        let s = eigendecompose(&rho).unwrap();
        for (got, want) in s.eigenvalues.iter().zip([0.5, 0.25, 0.25]) {
            assert!((got - want).abs() < 1e-12);
        }
        assert!((s.entropy() - 1.5).abs() < 1e-12);
    }

    #[test]
    fn four_copies_binomial_spectrum() {
        let s = eigendecompose(&prior_density(4, 10).unwrap()).unwrap();
        for (got, want) in s.eigenvalues.iter().zip(binomial_spectrum(4)) {
            assert!((got - want).abs() < 1e-10);
        }
    }

    #[test]
    fn holevo_bounds() {
        assert_eq!(holevo_bound_loose(1), 1.0);
        assert_eq!(holevo_bound_loose(3), 2.0);
        assert_eq!(holevo_bound_loose(7), 3.0);
        let c = 0.5 * (PI * E / 2.0).log2();
        assert!((holevo_bound_tight(1) - 1.047_096).abs() < 1e-6);
        assert!((holevo_bound_tight(1) - c).abs() < 1e-15);
        assert!((holevo_bound_tight(4) - (1.0 + c)).abs() < 1e-15);
        assert!((holevo_bound_tight(16) - (2.0 + c)).abs() < 1e-15);
    }

    #[test]
    fn one_way_margins() {
        let c = one_way_condition(10, 16);
        assert!((c.margin - (10.0 - 17f64.log2())).abs() < 1e-12);
        assert!((c.margin - 5.913).abs() < 1e-3);
        assert!(c.holds);
        assert!(!one_way_condition(2, 16).holds);
        let edge = one_way_condition_with_guard(3, 7, 0.0);
        assert_eq!(edge.margin, 0.0);
        assert!(edge.holds);
    }

    #[test]
    fn critical_resolution_small_tau() {
        let c1 = critical_n(1, DEFAULT_CRITICAL_TOLERANCE).unwrap();
        assert_eq!(c1.n_c, Some(1));
        assert!(c1.full_rank());

        let c2 = critical_n(2, DEFAULT_CRITICAL_TOLERANCE).unwrap();
        let nc = c2.n_c.unwrap();
        assert!(c2.full_rank());
        for n in 1..nc {
            assert!(eigendecompose(&prior_density(2, n).unwrap()).unwrap().rank < 3);
        }
        for n in nc..nc + 3 {
            assert_eq!(eigendecompose(&prior_density(2, n).unwrap()).unwrap().rank, 3);
        }
    }
}
