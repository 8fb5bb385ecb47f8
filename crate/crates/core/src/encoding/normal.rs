//! Code lengths for numeric target slices under normal models.
//!
//! Slices covered by a subgroup are encoded with a Bayesian code under
//! Jeffreys' prior, made proper by conditioning on two sample points that
//! are themselves encoded under the dataset distribution. Slices covered by
//! the default rule are encoded directly with the known dataset parameters.

use statrs::function::gamma::ln_gamma;

use super::DegenerateSubgroup;

const LOG2_E: f64 = std::f64::consts::LOG2_E;

/// The two conditioning points and the cost of encoding them non-optimally.
#[derive(Clone, Copy, Debug)]
pub struct TwoPointSelection {
    pub pair: (f64, f64),
    /// `L(pair | mu_d, sigma_d) - L_Bayes(pair)` in bits; may be negative.
    pub cost: f64,
}

/// Picks the two distinct values nearest to the dataset mean (ties broken
/// toward the smaller value) and returns them with their encoding cost.
/// Fails when the slice holds fewer than two distinct values.
pub fn two_point_selection(
    values: &[f64],
    mu_d: f64,
    sigma_d: f64,
) -> Result<TwoPointSelection, DegenerateSubgroup> {
    let key = |v: f64| ((v - mu_d).abs(), v);
    let mut first: Option<f64> = None;
    let mut second: Option<f64> = None;
    for &v in values {
        match first {
            None => first = Some(v),
            Some(f) if v == f => {}
            Some(f) => {
                if key(v) < key(f) {
                    second = Some(f);
                    first = Some(v);
                } else if second.is_none_or(|s| v != s && key(v) < key(s)) {
                    second = Some(v);
                }
            }
        }
    }
    let (Some(y1), Some(y2)) = (first, second) else {
        return Err(DegenerateSubgroup);
    };
    let cost = pair_cost(y1, y2, mu_d, sigma_d);
    Ok(TwoPointSelection {
        pair: (y1, y2),
        cost,
    })
}

/// Cost of a specific conditioning pair; exposed so the pair choice can be
/// compared against an exhaustive search over pairs.
pub fn pair_cost(y1: f64, y2: f64, mu_d: f64, sigma_d: f64) -> f64 {
    let known = known_normal(&[y1, y2], mu_d, sigma_d);
    let pair_variance = (y1 - y2) * (y1 - y2) / 4.0;
    known - bayes_improper(2, pair_variance)
}

/// Bayesian code length of a numeric slice with unknown mean and variance:
/// `1 + (n/2) log2 pi - log2 Gamma(n/2) + (1/2) log2 n + (n/2) log2(n s^2)`
/// plus the two-point cost. Needs `n >= 2` and positive variance.
pub fn bayes_normal(n: u64, variance: f64, two_point_cost: f64) -> Result<f64, DegenerateSubgroup> {
    if n < 2 || variance <= 0.0 {
        return Err(DegenerateSubgroup);
    }
    Ok(bayes_improper(n, variance) + two_point_cost)
}

/// `-log2 P_Bayes(Y)` under the improper Jeffreys prior `1/(sqrt(2 pi) s^2)`.
fn bayes_improper(n: u64, variance: f64) -> f64 {
    let nf = n as f64;
    let half = nf / 2.0;
    1.0 + half * std::f64::consts::PI.log2() - ln_gamma(half) * LOG2_E
        + 0.5 * nf.log2()
        + half * (nf * variance).log2()
}

/// Code length of a numeric slice under known parameters:
/// `(n/2) log2(2 pi s_d^2) + RSS / (2 s_d^2) * log2 e` with the residual sum
/// of squares taken against `mu_d`. The empty slice costs nothing.
pub fn known_normal(values: &[f64], mu_d: f64, sigma_d: f64) -> f64 {
    let rss: f64 = values.iter().map(|&y| (y - mu_d) * (y - mu_d)).sum();
    known_normal_terms(values.len() as u64, rss, sigma_d)
}

/// Same code length from sufficient statistics, using
/// `RSS_vs_mu_d = n s^2 + n (mean - mu_d)^2`.
pub fn known_normal_from_stats(n: u64, mean: f64, variance: f64, mu_d: f64, sigma_d: f64) -> f64 {
    let nf = n as f64;
    let rss = nf * variance + nf * (mean - mu_d) * (mean - mu_d);
    known_normal_terms(n, rss, sigma_d)
}

fn known_normal_terms(n: u64, rss: f64, sigma_d: f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    debug_assert!(sigma_d > 0.0, "known-parameter code needs sigma_d > 0");
    let nf = n as f64;
    let var_d = sigma_d * sigma_d;
    nf / 2.0 * (2.0 * std::f64::consts::PI).log2() + nf / 2.0 * var_d.log2()
        + rss / (2.0 * var_d) * LOG2_E
}
