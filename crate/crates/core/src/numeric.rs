//! Small numerical helpers shared by the analyses.

use statrs::function::factorial::ln_binomial;

/// Binomial coefficient as a float; exact integer arithmetic while it fits
/// in `u128`.
pub fn binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut exact: Option<u128> = Some(1);
    let mut approx = 1.0f64;
    for i in 0..k {
        exact = exact
            .and_then(|acc| acc.checked_mul((n - i) as u128))
            .map(|acc| acc / (i + 1) as u128);
        approx = approx * (n - i) as f64 / (i + 1) as f64;
    }
    exact.map_or(approx, |v| v as f64)
}

/// Natural log of the binomial coefficient.
pub fn log_binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    ln_binomial(n, k)
}

/// `-p log2 p` with the `0 log 0 = 0` convention.
pub fn entropy_term(p: f64) -> f64 {
    if p > 0.0 {
        -p * p.log2()
    } else {
        0.0
    }
}

/// Shannon entropy in bits of a probability vector.
pub fn shannon_entropy(probs: &[f64]) -> f64 {
    probs.iter().copied().map(entropy_term).sum()
}

/// Pairwise (tree) summation of a slice.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const BLOCK: usize = 16;
    if xs.len() <= BLOCK {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Tree accumulator for vectors of fixed length.
///
/// Partial sums are kept on a stack tagged with their level; two partials at
/// the same level are merged, exactly like a binary counter. The result is the
/// pairwise sum of all pushed blocks.
pub(crate) struct PairwiseAccumulator {
    len: usize,
    stack: Vec<(u32, Vec<f64>)>,
}

impl PairwiseAccumulator {
    pub fn new(len: usize) -> Self {
        Self {
            len,
            stack: Vec::new(),
        }
    }

    pub fn push(&mut self, block: Vec<f64>) {
        debug_assert_eq!(block.len(), self.len);
        let mut level = 0;
        let mut cur = block;
        while let Some((top_level, _)) = self.stack.last() {
            if *top_level != level {
                break;
            }
            let (_, mut top) = self.stack.pop().unwrap();
            for (t, c) in top.iter_mut().zip(&cur) {
                *t += c;
            }
            cur = top;
            level += 1;
        }
        self.stack.push((level, cur));
    }

    pub fn finish(mut self) -> Vec<f64> {
        let mut acc = match self.stack.pop() {
            Some((_, v)) => v,
            None => return vec![0.0; self.len],
        };
        while let Some((_, v)) = self.stack.pop() {
            for (a, b) in acc.iter_mut().zip(&v) {
                *a += b;
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), 6.0);
        assert_eq!(binomial(10, 0), 1.0);
        assert_eq!(binomial(10, 10), 1.0);
        assert_eq!(binomial(3, 5), 0.0);
        assert_eq!(binomial(64, 32), 1_832_624_140_942_590_534u64 as f64);
        assert!((log_binomial(40, 20) - binomial(40, 20).ln()).abs() < 1e-10);
    }

    #[test]
    fn entropy_of_fair_coin() {
        assert_eq!(shannon_entropy(&[0.5, 0.5]), 1.0);
        assert_eq!(shannon_entropy(&[1.0, 0.0]), 0.0);
        assert!((shannon_entropy(&[0.25, 0.5, 0.25]) - 1.5).abs() < 1e-15);
    }

    #[test]
    fn pairwise_matches_naive() {
        let xs: Vec<f64> = (0..1000).map(|i| i as f64 * 0.5).collect();
        assert_eq!(pairwise_sum(&xs), 249_750.0);

        let mut acc = PairwiseAccumulator::new(2);
        for i in 0..37 {
            acc.push(vec![1.0, i as f64]);
        }
        assert_eq!(acc.finish(), vec![37.0, 666.0]);
        assert_eq!(PairwiseAccumulator::new(3).finish(), vec![0.0; 3]);
    }
}
