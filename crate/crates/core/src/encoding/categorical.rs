//! Code lengths for categorical target slices.

use super::multinomial::multinomial_complexity;

/// Normalised maximum likelihood code length of a categorical slice:
/// the maximum-likelihood log-loss plus the multinomial complexity,
/// `-sum_c n_c log2(n_c / n) + log2 C(n, k)` with `0 log 0 := 0`.
pub fn nml_categorical(counts: &[u64], k: usize) -> f64 {
    debug_assert_eq!(counts.len(), k);
    let n: u64 = counts.iter().sum();
    ml_log_loss(counts, n) + multinomial_complexity(n, k as u32)
}

/// Code length of a categorical slice under known class probabilities,
/// `-sum_c n_c log2 q_c`. Every observed class must have positive
/// probability; with the dataset marginal as `q` that always holds.
pub fn known_categorical(counts: &[u64], probs: &[f64]) -> f64 {
    debug_assert_eq!(counts.len(), probs.len());
    let mut bits = 0.0;
    for (&count, &q) in counts.iter().zip(probs) {
        if count == 0 {
            continue;
        }
        assert!(q > 0.0, "observed class has zero probability in the default distribution");
        bits -= count as f64 * q.log2();
    }
    bits
}

fn ml_log_loss(counts: &[u64], n: u64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let mut bits = 0.0;
    for &count in counts {
        if count > 0 {
            bits -= count as f64 * (count as f64 / n as f64).log2();
        }
    }
    bits
}
