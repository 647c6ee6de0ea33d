//! Small numeric utilities: deterministic reductions and seed derivation.

/// Pairwise (cascade) summation of `f(0), ..., f(n-1)`.
///
/// Error grows like O(log n) instead of O(n) for a running sum, and the
/// reduction tree depends only on `n`, so the result is independent of any
/// parallel schedule that feeds it.
pub fn pairwise_sum_by<F: Fn(usize) -> f64>(n: usize, f: F) -> f64 {
    fn go<F: Fn(usize) -> f64>(lo: usize, hi: usize, f: &F) -> f64 {
        if hi - lo <= 32 {
            let mut acc = 0.0;
            for i in lo..hi {
                acc += f(i);
            }
            acc
        } else {
            let mid = lo + (hi - lo) / 2;
            go(lo, mid, f) + go(mid, hi, f)
        }
    }
    if n == 0 {
        0.0
    } else {
        go(0, n, &f)
    }
}

/// Pairwise summation of a slice.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    pairwise_sum_by(values.len(), |i| values[i])
}

/// Derive an independent child seed from a base seed and an index
/// (splitmix64 finalizer). Used for per-case and per-stream generators so
/// parallel schedules reproduce identical results.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Sample mean and standard error of the mean (ddof = 1).
///
/// Returns `(mean, std_error)`; the standard error is 0 for a single value.
pub fn mean_and_std_error(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    assert!(n > 0, "mean_and_std_error on empty slice");
    let mean = pairwise_sum(values) / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = pairwise_sum_by(n, |i| {
        let d = values[i] - mean;
        d * d
    }) / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_matches_naive_on_small_input() {
        let xs: Vec<f64> = (0..100).map(|i| (i as f64).sin()).collect();
        let naive: f64 = xs.iter().sum();
        assert!((pairwise_sum(&xs) - naive).abs() < 1e-12);
    }

    #[test]
    fn pairwise_sum_of_empty_is_zero() {
        assert_eq!(pairwise_sum(&[]), 0.0);
    }

    #[test]
    fn derived_seeds_differ_across_indices() {
        let a = derive_seed(42, 0);
        let b = derive_seed(42, 1);
        assert_ne!(a, b);
        assert_eq!(a, derive_seed(42, 0));
    }

    #[test]
    fn std_error_of_constant_sample_is_zero() {
        let (m, se) = mean_and_std_error(&[2.5, 2.5, 2.5]);
        assert_eq!(m, 2.5);
        assert_eq!(se, 0.0);
    }
}
