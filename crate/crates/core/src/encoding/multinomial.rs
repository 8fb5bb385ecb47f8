//! Stochastic complexity of the multinomial model, computed exactly by the
//! linear-in-k recurrence of Mononen & Myllymäki and cached across calls.
//!
//! `C(n, k)` is the normalising sum of the NML code: the sum over all k-ary
//! sequences of length n of each sequence's maximum-likelihood probability.
//! This module works with its base-2 logarithm throughout.

use std::collections::HashMap;
use std::sync::RwLock;

use once_cell::sync::Lazy;
use statrs::function::gamma::ln_gamma;

const LOG2_E: f64 = std::f64::consts::LOG2_E;

static CACHE: Lazy<RwLock<HashMap<(u64, u32), f64>>> = Lazy::new(|| RwLock::new(HashMap::new()));

/// `log2 C(n, k)` in bits. `C(0, k) = C(n, 1) = 1`, so those cost nothing.
///
/// Values are memoised; the whole recurrence chain up to `k` is stored on
/// first use, so repeated lookups are constant time. Concurrent callers may
/// race to fill the cache, but every computation is a pure function of
/// `(n, k)` and produces bit-identical values.
pub fn multinomial_complexity(n: u64, k: u32) -> f64 {
    assert!(k >= 1, "multinomial complexity needs at least one class");
    if n == 0 || k == 1 {
        return 0.0;
    }
    if let Some(&bits) = CACHE.read().expect("complexity cache poisoned").get(&(n, k)) {
        return bits;
    }
    let chain = complexity_chain(n, k);
    let bits = chain[k as usize];
    let mut cache = CACHE.write().expect("complexity cache poisoned");
    for (j, &value) in chain.iter().enumerate().skip(1) {
        cache.entry((n, j as u32)).or_insert(value);
    }
    bits
}

/// log2-space recurrence: C(n, k+2) = C(n, k+1) + (n / k) C(n, k),
/// anchored at C(n, 1) = 1 and the closed binomial sum for C(n, 2).
fn complexity_chain(n: u64, k: u32) -> Vec<f64> {
    let mut chain = vec![0.0; k as usize + 1];
    if k >= 2 {
        chain[2] = log2_complexity_binary(n);
    }
    for j in 1..=(k as u64).saturating_sub(2) {
        let grown = (n as f64 / j as f64).log2() + chain[j as usize];
        chain[j as usize + 2] = log2_add_exp(chain[j as usize + 1], grown);
    }
    chain
}

/// `log2 C(n, 2)` via the exact sum over class splits,
/// `sum_h binom(n, h) (h/n)^h ((n-h)/n)^(n-h)`. Each term is a binomial
/// likelihood in (0, 1], so the terms are exponentiated individually and
/// summed in linear space.
fn log2_complexity_binary(n: u64) -> f64 {
    let nf = n as f64;
    let mut sum = 0.0;
    for h in 0..=n {
        let hf = h as f64;
        let rest = nf - hf;
        let mut ln_term = ln_binomial(n, h);
        if h > 0 {
            ln_term += hf * (hf / nf).ln();
        }
        if h < n {
            ln_term += rest * (rest / nf).ln();
        }
        sum += ln_term.exp();
    }
    sum.log2()
}

fn ln_binomial(n: u64, h: u64) -> f64 {
    ln_gamma(n as f64 + 1.0) - ln_gamma(h as f64 + 1.0) - ln_gamma((n - h) as f64 + 1.0)
}

/// `log2(2^a + 2^b)` without leaving log space.
fn log2_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + ((lo - hi).exp2().ln_1p() * LOG2_E)
}
