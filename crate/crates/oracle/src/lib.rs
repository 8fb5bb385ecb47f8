//! Independent validators for the code lengths and the search: exhaustive
//! enumeration where the closed forms use recurrences, numerical quadrature
//! where they use closed-form integrals, and full search-space enumeration
//! where the miner uses a beam. These are reference implementations meant
//! for audits and tests, not performance paths; every routine enforces an
//! explicit budget instead of silently truncating.

use thiserror::Error;

use sdlist::bitset::RowSet;
use sdlist::data::{generate_items, Dataset};
use sdlist::encoding::{known_normal, two_point_selection, EncodingContext};
use sdlist::model::{Description, TargetPart};
use sdlist::search::compression_gain;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
}

/// Hard limits for the brute-force routines.
#[derive(Clone, Copy, Debug)]
pub struct OracleBudget {
    /// Sequence enumeration refuses when `k^n` exceeds this.
    pub max_sequences: u64,
    /// Exhaustive description search refuses above this many explanatory
    /// variables.
    pub max_features: usize,
    pub grid: QuadratureGrid,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_sequences: 10_000_000,
            max_features: 4,
            grid: QuadratureGrid::default(),
        }
    }
}

/// Grid for the two-dimensional posterior integration: the location axis
/// spans `mu_hat ± mu_span_sigmas * sigma_hat` uniformly, the scale axis
/// spans `(sigma_hat / sigma_lo_div, sigma_hi_mult * sigma_hat)`
/// log-uniformly.
#[derive(Clone, Copy, Debug)]
pub struct QuadratureGrid {
    pub mu_span_sigmas: f64,
    pub sigma_lo_div: f64,
    pub sigma_hi_mult: f64,
    pub points_per_axis: usize,
}

impl Default for QuadratureGrid {
    fn default() -> Self {
        QuadratureGrid {
            mu_span_sigmas: 10.0,
            sigma_lo_div: 100.0,
            sigma_hi_mult: 20.0,
            points_per_axis: 2000,
        }
    }
}

impl QuadratureGrid {
    /// Doubles both the spans and the resolution.
    pub fn refined(&self) -> QuadratureGrid {
        QuadratureGrid {
            mu_span_sigmas: self.mu_span_sigmas * 2.0,
            sigma_lo_div: self.sigma_lo_div * 2.0,
            sigma_hi_mult: self.sigma_hi_mult * 2.0,
            points_per_axis: self.points_per_axis * 2,
        }
    }
}

/// `log2` of the sum, over all `k^n` sequences of length `n`, of each
/// sequence's probability under its own maximum-likelihood distribution.
/// The closed recurrence in the library must reproduce this exactly.
pub fn enumerate_multinomial_complexity(
    n: usize,
    k: usize,
    budget: &OracleBudget,
) -> Result<f64, OracleError> {
    check_sequence_budget(n, k, budget)?;
    if n == 0 || k == 1 {
        return Ok(0.0);
    }
    let mut sum = 0.0;
    let mut sequence = vec![0usize; n];
    loop {
        let mut counts = vec![0u64; k];
        for &z in &sequence {
            counts[z] += 1;
        }
        sum += ml_probability(&counts, n as f64);
        if !advance(&mut sequence, k) {
            break;
        }
    }
    Ok(sum.log2())
}

/// Brute-force NML code length of labelled data split into fixed parts:
/// the maximum-likelihood log-loss of the actual parts plus `log2` of the
/// sum over all joint sequences of the product of per-part ML
/// probabilities. By the separation property this must equal the sum of
/// per-part NML code lengths.
pub fn nml_partition_bruteforce(
    parts: &[Vec<usize>],
    k: usize,
    budget: &OracleBudget,
) -> Result<f64, OracleError> {
    let n: usize = parts.iter().map(Vec::len).sum();
    check_sequence_budget(n, k, budget)?;
    let sizes: Vec<usize> = parts.iter().map(Vec::len).collect();

    let mut log_loss = 0.0;
    for part in parts {
        let mut counts = vec![0u64; k];
        for &label in part {
            counts[label] += 1;
        }
        for &c in &counts {
            if c > 0 {
                log_loss -= c as f64 * (c as f64 / part.len() as f64).log2();
            }
        }
    }

    let mut complexity_sum = 0.0;
    let mut sequence = vec![0usize; n];
    loop {
        let mut product = 1.0;
        let mut offset = 0;
        for &size in &sizes {
            let mut counts = vec![0u64; k];
            for &z in &sequence[offset..offset + size] {
                counts[z] += 1;
            }
            product *= ml_probability(&counts, size as f64);
            offset += size;
        }
        complexity_sum += product;
        if !advance(&mut sequence, k) {
            break;
        }
    }
    Ok(log_loss + complexity_sum.log2())
}

fn check_sequence_budget(n: usize, k: usize, budget: &OracleBudget) -> Result<(), OracleError> {
    let mut states: u64 = 1;
    for _ in 0..n {
        states = states.saturating_mul(k as u64);
        if states > budget.max_sequences {
            return Err(OracleError::Budget(format!(
                "{k}^{n} sequences exceed the enumeration budget of {}",
                budget.max_sequences
            )));
        }
    }
    Ok(())
}

/// Probability of a sequence with the given class counts under its own
/// maximum-likelihood categorical distribution.
fn ml_probability(counts: &[u64], n: f64) -> f64 {
    let mut p = 1.0;
    for &c in counts {
        if c > 0 {
            p *= (c as f64 / n).powi(c as i32);
        }
    }
    p
}

fn advance(sequence: &mut [usize], k: usize) -> bool {
    for digit in sequence.iter_mut() {
        *digit += 1;
        if *digit < k {
            return true;
        }
        *digit = 0;
    }
    false
}

/// The best single subgroup by exhaustive enumeration of every canonical
/// description up to `max_depth`, scored with the unnormalised top-1 gain
/// and the same tie-breaking as the beam search.
#[derive(Clone, Debug)]
pub struct TopCandidate {
    pub description: Description,
    pub n_a: usize,
    pub gain: f64,
}

pub fn exhaustive_top1(
    dataset: &Dataset,
    n_cut: usize,
    max_depth: usize,
    min_coverage: usize,
    budget: &OracleBudget,
) -> Result<Option<TopCandidate>, OracleError> {
    let m = dataset.explanatory_indices().len();
    if m > budget.max_features {
        return Err(OracleError::Budget(format!(
            "{m} explanatory variables exceed the exhaustive-search budget of {}",
            budget.max_features
        )));
    }
    let universe = generate_items(dataset, n_cut);
    let ctx = EncodingContext::new(dataset, &universe, true);
    let full = RowSet::full(dataset.n());

    let mut best: Option<(TopCandidate, String)> = None;
    let mut stack: Vec<(usize, Vec<usize>, RowSet)> = vec![(0, Vec::new(), full)];
    while let Some((next_item, chosen, cover)) = stack.pop() {
        for (i, item) in universe.items.iter().enumerate().skip(next_item) {
            if chosen
                .iter()
                .any(|&j| universe.items[j].column == item.column)
            {
                continue;
            }
            let refined_cover = cover.and(&universe.covers[i]);
            let n_a = refined_cover.count();
            let mut chosen_now = chosen.clone();
            chosen_now.push(i);
            if n_a >= min_coverage {
                let description =
                    Description::new(chosen_now.iter().map(|&j| universe.items[j]).collect());
                if encodable(dataset, &ctx, &refined_cover) {
                    let gain =
                        compression_gain(0, &description, &refined_cover, dataset, &ctx, 0.0)
                            .expect("encodable cover scores");
                    let key = description.display(dataset);
                    let candidate = TopCandidate {
                        description,
                        n_a,
                        gain,
                    };
                    // higher gain, then fewer conditions, then the smaller
                    // canonical form; identical to the beam's preference
                    let better = match &best {
                        None => true,
                        Some((b, b_key)) => {
                            gain.total_cmp(&b.gain)
                                .then_with(|| {
                                    b.description.len().cmp(&candidate.description.len())
                                })
                                .then_with(|| b_key.as_str().cmp(key.as_str()))
                                == std::cmp::Ordering::Greater
                        }
                    };
                    if better {
                        best = Some((candidate, key));
                    }
                }
            }
            // refinements only shrink covers, so undersized ones are done
            if chosen_now.len() < max_depth && n_a >= min_coverage {
                stack.push((i + 1, chosen_now, refined_cover));
            }
        }
    }
    Ok(best.map(|(c, _)| c).filter(|c| c.gain > 0.0))
}

fn encodable(dataset: &Dataset, ctx: &EncodingContext, cover: &RowSet) -> bool {
    ctx.targets.iter().all(|meta| {
        TargetPart::gather(dataset, meta.column, cover.iter()).is_encodable()
    })
}

/// Bayesian code length of a numeric slice by two-dimensional numerical
/// integration of the posterior mass, for both the full sample and the
/// conditioning pair, combined as `-log I(Y) + log I(pair) + L(pair | d)`.
/// Valid for 3 to 6 points.
pub fn quadrature_bayes(
    values: &[f64],
    mu_d: f64,
    sigma_d: f64,
    grid: &QuadratureGrid,
) -> Result<f64, OracleError> {
    if !(3..=6).contains(&values.len()) {
        return Err(OracleError::Budget(format!(
            "quadrature oracle covers 3 to 6 points, got {}",
            values.len()
        )));
    }
    let picked = two_point_selection(values, mu_d, sigma_d)
        .map_err(|e| OracleError::Degenerate(e.to_string()))?;
    let pair = [picked.pair.0, picked.pair.1];
    let full_mass = posterior_mass(values, grid)?;
    let pair_mass = posterior_mass(&pair, grid)?;
    Ok(-full_mass.log2() + pair_mass.log2() + known_normal(&pair, mu_d, sigma_d))
}

/// `∫∫ f(Y | mu, sigma) / (sqrt(2 pi) sigma^2) dmu dsigma` by trapezoid
/// rules, uniform in `ln sigma`. For three or more points the location axis
/// is the plain uniform grid; the two-point posterior has Student-t tails
/// heavy enough that a ±10-sigma window truncates a percent of the mass, so
/// the pair integral substitutes `mu = mean + sd * tan(theta)` to cover the
/// whole real line and stretches the scale axis.
fn posterior_mass(values: &[f64], grid: &QuadratureGrid) -> Result<f64, OracleError> {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let rss: f64 = values.iter().map(|&v| (v - mean) * (v - mean)).sum();
    let sd = (rss / n).sqrt();
    if sd <= 0.0 {
        return Err(OracleError::Degenerate(
            "quadrature needs at least two distinct values".into(),
        ));
    }

    let heavy_tailed = values.len() == 2;
    let points = if heavy_tailed {
        grid.points_per_axis * 3
    } else {
        grid.points_per_axis
    };
    let sigma_hi_mult = if heavy_tailed {
        grid.sigma_hi_mult * 50.0
    } else {
        grid.sigma_hi_mult
    };

    let ln_sigma_lo = (sd / grid.sigma_lo_div).ln();
    let ln_sigma_hi = (sigma_hi_mult * sd).ln();
    let d_ln_sigma = (ln_sigma_hi - ln_sigma_lo) / (points - 1) as f64;

    // precompute the location nodes, their jacobians and A(mu)
    let mut nodes = Vec::with_capacity(points);
    let d_mu;
    if heavy_tailed {
        let d_theta = std::f64::consts::PI / (points + 1) as f64;
        d_mu = d_theta;
        for i in 1..=points {
            let theta = -std::f64::consts::FRAC_PI_2 + i as f64 * d_theta;
            let mu = mean + sd * theta.tan();
            let jacobian = sd / (theta.cos() * theta.cos());
            nodes.push((rss + n * (mu - mean) * (mu - mean), jacobian));
        }
    } else {
        let mu_lo = mean - grid.mu_span_sigmas * sd;
        let mu_hi = mean + grid.mu_span_sigmas * sd;
        d_mu = (mu_hi - mu_lo) / (points - 1) as f64;
        for i in 0..points {
            let mu = mu_lo + i as f64 * d_mu;
            nodes.push((rss + n * (mu - mean) * (mu - mean), 1.0));
        }
    }

    let norm = (2.0 * std::f64::consts::PI).powf(-(n + 1.0) / 2.0);
    let mut total = 0.0;
    for si in 0..points {
        let sigma = (ln_sigma_lo + si as f64 * d_ln_sigma).exp();
        let inv_two_var = 1.0 / (2.0 * sigma * sigma);
        // prior 1/sigma^2 and the d(ln sigma) substitution contribute
        // sigma^-1; likelihood contributes sigma^-n
        let scale = sigma.powf(-(n + 1.0));
        let mut inner = 0.0;
        for (mi, &(a, jacobian)) in nodes.iter().enumerate() {
            let term = scale * (-a * inv_two_var).exp() * jacobian;
            let weight = if mi == 0 || mi == points - 1 { 0.5 } else { 1.0 };
            inner += weight * term;
        }
        let weight = if si == 0 || si == points - 1 { 0.5 } else { 1.0 };
        total += weight * inner * d_mu;
    }
    Ok(norm * total * d_ln_sigma)
}
