//! Independent oracles used by the integration and acceptance tests. Nothing
//! here calls into the code paths it is used to check.

#![allow(dead_code)]

/// Probability that an even number of `s` independent bits are wrong, by
/// enumerating all `2^s` error patterns.
pub fn brute_force_even_errors(q: f64, s: usize) -> f64 {
    let mut total = 0.0;
    for pattern in 0u64..(1u64 << s) {
        let wrong = pattern.count_ones() as i32;
        if wrong % 2 == 0 {
            total += (1.0 - q).powi(wrong) * q.powi(s as i32 - wrong);
        }
    }
    total
}

fn double_factorial(n: i64) -> f64 {
    let mut acc = 1.0;
    let mut k = n;
    while k > 1 {
        acc *= k as f64;
        k -= 2;
    }
    acc
}

fn choose(n: u64, k: u64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Mean of `cos^a(α) sin^b(α)` for `α` uniform on `[0, π)`, with `a + b`
/// even: zero when both are odd, `(a-1)!!(b-1)!!/(a+b)!!` otherwise.
fn half_angle_moment(a: u32, b: u32) -> f64 {
    if a % 2 == 1 {
        return 0.0;
    }
    double_factorial(a as i64 - 1) * double_factorial(b as i64 - 1) / double_factorial((a + b) as i64)
}

/// The prior density in the large-`n` limit, from closed-form moments of the
/// uniform circle average.
pub fn continuous_prior(tau: usize) -> Vec<Vec<f64>> {
    let t = tau as u32;
    (0..=t)
        .map(|l| {
            (0..=t)
                .map(|lp| {
                    let norm = (choose(tau as u64, l as u64) * choose(tau as u64, lp as u64)).sqrt();
                    norm * half_angle_moment(2 * t - l - lp, l + lp)
                })
                .collect()
        })
        .collect()
}

/// Smallest `n` with `2^n > τ`: once the `2^n` sample angles outnumber the
/// highest Fourier frequency `τ` present in the summand, the discrete
/// average equals the circle average.
pub fn aliasing_free_resolution(tau: usize) -> u32 {
    let mut n = 1;
    while (1usize << n) <= tau {
        n += 1;
    }
    n
}

/// Pearson statistic against a uniform distribution over `counts.len()` cells.
pub fn chi_square_uniform(counts: &[u64]) -> f64 {
    let total: u64 = counts.iter().sum();
    let expected = total as f64 / counts.len() as f64;
    counts
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum()
}

/// Three-sigma acceptance threshold for a chi-square with `df` degrees of
/// freedom (normal approximation).
pub fn chi_square_3sigma(df: usize) -> f64 {
    df as f64 + 3.0 * (2.0 * df as f64).sqrt()
}

/// Mean of a `2π`-periodic function by the trapezoid rule on `m` points;
/// exact for trigonometric polynomials of degree below `m`.
pub fn periodic_mean(m: usize, f: impl Fn(f64) -> f64) -> f64 {
    (0..m)
        .map(|i| f(std::f64::consts::TAU * i as f64 / m as f64))
        .sum::<f64>()
        / m as f64
}

/// Shannon entropy in bits, computed locally.
pub fn entropy_bits(ps: &[f64]) -> f64 {
    ps.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.log2()).sum()
}

/// `B(τ,i)/2^τ` for `i = 0..=τ`, sorted descending.
pub fn binomial_distribution(tau: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..=tau)
        .map(|i| choose(tau as u64, i as u64) / 2f64.powi(tau as i32))
        .collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}
