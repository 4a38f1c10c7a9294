//! Cyclic Jacobi diagonalization of small dense real symmetric matrices.

use crate::error::{Error, Result};

/// Convergence threshold on the off-diagonal Frobenius norm.
pub const OFF_DIAGONAL_TOLERANCE: f64 = 1e-12;

/// Sweep budget; 65x65 matrices converge in about ten.
pub const MAX_SWEEPS: usize = 100;

/// Eigenpairs sorted by descending eigenvalue.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    /// `vectors[i]` is the unit eigenvector for `values[i]`.
    pub vectors: Vec<Vec<f64>>,
    pub sweeps: usize,
}

fn off_diagonal_norm(a: &[f64], dim: usize) -> f64 {
    let mut sum = 0.0;
    for p in 0..dim {
        for q in (p + 1)..dim {
            sum += 2.0 * a[p * dim + q] * a[p * dim + q];
        }
    }
    sum.sqrt()
}

/// Diagonalizes the row-major symmetric `dim x dim` matrix `matrix`.
///
/// Each sweep visits every `(p, q)` pair once and applies the plane rotation
/// that annihilates `a_pq`. Eigenvectors are the accumulated rotations.
pub fn jacobi_eigen(matrix: &[f64], dim: usize) -> Result<EigenDecomposition> {
    assert_eq!(matrix.len(), dim * dim, "matrix is not dim x dim");
    let mut a = matrix.to_vec();
    let mut v = vec![0.0; dim * dim];
    for i in 0..dim {
        v[i * dim + i] = 1.0;
    }

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&a, dim);
        if off < OFF_DIAGONAL_TOLERANCE {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_norm: off,
            });
        }
        sweeps += 1;

        for p in 0..dim {
            for q in (p + 1)..dim {
                let apq = a[p * dim + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * dim + p];
                let aqq = a[q * dim + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                for k in 0..dim {
                    let akp = a[k * dim + p];
                    let akq = a[k * dim + q];
                    a[k * dim + p] = c * akp - s * akq;
                    a[k * dim + q] = s * akp + c * akq;
                }
                for k in 0..dim {
                    let apk = a[p * dim + k];
                    let aqk = a[q * dim + k];
                    a[p * dim + k] = c * apk - s * aqk;
                    a[q * dim + k] = s * apk + c * aqk;
                }
                a[p * dim + q] = 0.0;
                a[q * dim + p] = 0.0;

                for k in 0..dim {
                    let vkp = v[k * dim + p];
                    let vkq = v[k * dim + q];
                    v[k * dim + p] = c * vkp - s * vkq;
                    v[k * dim + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&i, &j| a[j * dim + j].total_cmp(&a[i * dim + i]));
    let values = order.iter().map(|&i| a[i * dim + i]).collect();
    let vectors = order
        .iter()
        .map(|&i| (0..dim).map(|k| v[k * dim + i]).collect())
        .collect();
    Ok(EigenDecomposition {
        values,
        vectors,
        sweeps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residual(m: &[f64], dim: usize, lambda: f64, v: &[f64]) -> f64 {
        (0..dim)
            .map(|i| {
                let mv: f64 = (0..dim).map(|j| m[i * dim + j] * v[j]).sum();
                (mv - lambda * v[i]).powi(2)
            })
            .sum::<f64>()
            .sqrt()
    }

    #[test]
    fn two_by_two() {
        let m = [2.0, 1.0, 1.0, 2.0];
        let e = jacobi_eigen(&m, 2).unwrap();
        assert!((e.values[0] - 3.0).abs() < 1e-14);
        assert!((e.values[1] - 1.0).abs() < 1e-14);
        for (l, v) in e.values.iter().zip(&e.vectors) {
            assert!(residual(&m, 2, *l, v) < 1e-12);
        }
    }

    #[test]
    fn already_diagonal() {
        let m = [0.5, 0.0, 0.0, 0.5];
        let e = jacobi_eigen(&m, 2).unwrap();
        assert_eq!(e.values, vec![0.5, 0.5]);
        assert_eq!(e.sweeps, 0);
    }

    #[test]
    fn known_spectrum_3x3() {
        // [[2,-1,0],[-1,2,-1],[0,-1,2]] has eigenvalues 2 - sqrt2, 2, 2 + sqrt2
        let m = [2.0, -1.0, 0.0, -1.0, 2.0, -1.0, 0.0, -1.0, 2.0];
        let e = jacobi_eigen(&m, 3).unwrap();
        let s2 = 2f64.sqrt();
        for (got, want) in e.values.iter().zip([2.0 + s2, 2.0, 2.0 - s2]) {
            assert!((got - want).abs() < 1e-13);
        }
        for (l, v) in e.values.iter().zip(&e.vectors) {
            assert!(residual(&m, 3, *l, v) < 1e-12);
        }
    }

    #[test]
    fn larger_random_symmetric() {
        let dim = 40;
        let mut m = vec![0.0; dim * dim];
        let mut x = 0.123_f64;
        for i in 0..dim {
            for j in i..dim {
                x = (x * 997.0 + 0.31).fract();
                m[i * dim + j] = x - 0.5;
                m[j * dim + i] = x - 0.5;
            }
        }
        let e = jacobi_eigen(&m, dim).unwrap();
        let trace: f64 = (0..dim).map(|i| m[i * dim + i]).sum();
        assert!((e.values.iter().sum::<f64>() - trace).abs() < 1e-10);
        for (l, v) in e.values.iter().zip(&e.vectors) {
            assert!(residual(&m, dim, *l, v) < 1e-10);
        }
        assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
    }
}
