//! Quality measures for subgroups and subgroup lists.
//!
//! All divergences are reported in bits so they stay commensurate with the
//! code lengths.

use serde::{Deserialize, Serialize};

use crate::data::{ColumnKind, Dataset};
use crate::encoding::{data_length, total_length, DegenerateSubgroup, EncodingContext};
use crate::model::{SubgroupList, TargetPart, TargetStatistics};

const LOG2_E: f64 = std::f64::consts::LOG2_E;

/// `sum_c p_c log2(p_c / q_c)` with `0 log 0 := 0`. A class with positive
/// `p` but zero `q` makes the divergence infinite.
pub fn kl_categorical(p: &[f64], q: &[f64]) -> f64 {
    debug_assert_eq!(p.len(), q.len());
    let mut total = 0.0;
    for (&pc, &qc) in p.iter().zip(q) {
        if pc == 0.0 {
            continue;
        }
        if qc == 0.0 {
            return f64::INFINITY;
        }
        total += pc * (pc / qc).log2();
    }
    total
}

/// Location-only divergence `(mu_d - mu_a)^2 / sigma_d`.
pub fn kl_normal_mu(mu_a: f64, mu_d: f64, sigma_d: f64) -> f64 {
    debug_assert!(sigma_d > 0.0);
    (mu_d - mu_a) * (mu_d - mu_a) / sigma_d
}

/// Dispersion-aware divergence between normals, in bits:
/// `log2(sd/sa) + (sa^2 + (ma - md)^2) / (2 sd^2) * log2 e - log2(e)/2`.
pub fn kl_normal_full(mu_a: f64, sigma_a: f64, mu_d: f64, sigma_d: f64) -> f64 {
    debug_assert!(sigma_a > 0.0 && sigma_d > 0.0);
    (sigma_d / sigma_a).log2()
        + (sigma_a * sigma_a + (mu_a - mu_d) * (mu_a - mu_d)) / (2.0 * sigma_d * sigma_d) * LOG2_E
        - LOG2_E / 2.0
}

fn kl_for(stats: &TargetStatistics, default: &TargetStatistics) -> f64 {
    match (stats, default) {
        (TargetStatistics::Categorical { .. }, TargetStatistics::Categorical { .. }) => {
            kl_categorical(&stats.probs(), &default.probs())
        }
        (TargetStatistics::Normal { .. }, TargetStatistics::Normal { .. }) => kl_normal_full(
            stats.mean(),
            stats.std_dev(),
            default.mean(),
            default.std_dev(),
        ),
        _ => panic!("mismatched target statistics kinds"),
    }
}

/// Weighted KL divergence of one subgroup, `n_a * KL`, summed over targets
/// under the independence assumption.
pub fn wkl(stats: &[TargetStatistics], defaults: &[TargetStatistics]) -> f64 {
    debug_assert_eq!(stats.len(), defaults.len());
    if stats.is_empty() || stats[0].n() == 0 {
        return 0.0;
    }
    let n_a = stats[0].n() as f64;
    n_a * stats
        .iter()
        .zip(defaults)
        .map(|(s, d)| kl_for(s, d))
        .sum::<f64>()
}

/// Sum of weighted KL divergences over the list's induced covers, divided by
/// the dataset size. Multi-target lists sum across targets without dividing
/// by the target count.
pub fn swkl(list: &SubgroupList, dataset: &Dataset) -> f64 {
    let cover = list.cover(dataset);
    let targets = dataset.target_indices();
    let mut total = 0.0;
    for rows in &cover.subgroup_rows {
        if rows.is_empty() {
            continue;
        }
        let stats: Vec<TargetStatistics> = targets
            .iter()
            .map(|&col| {
                TargetPart::gather(dataset, col, rows.iter().map(|&r| r as usize)).statistics()
            })
            .collect();
        total += wkl(&stats, list.default_stats());
    }
    total / dataset.n() as f64
}

/// `L(D, M) / L(D | default)`: total code length of the list against the
/// cost of encoding everything under the dataset distribution. Exactly 1 for
/// the empty list, strictly below 1 for any list worth keeping.
pub fn compression_ratio(
    dataset: &Dataset,
    list: &SubgroupList,
    ctx: &EncodingContext,
) -> Result<f64, DegenerateSubgroup> {
    let baseline = data_length(dataset, &SubgroupList::empty(dataset), ctx)?;
    Ok(total_length(dataset, list, ctx)? / baseline)
}

/// Headline numbers for a mined list.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ListSummary {
    pub n_subgroups: usize,
    /// Mean description size.
    pub avg_conditions: f64,
    pub swkl: f64,
    pub compression_ratio: f64,
    pub total_bits: f64,
    /// First subgroup's standard deviation over the dataset's, numeric
    /// targets only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normalized_std_first: Option<f64>,
}

impl ListSummary {
    pub fn compute(
        dataset: &Dataset,
        list: &SubgroupList,
        ctx: &EncodingContext,
    ) -> Result<ListSummary, DegenerateSubgroup> {
        let n_subgroups = list.len();
        let avg_conditions = if n_subgroups == 0 {
            0.0
        } else {
            list.subgroups
                .iter()
                .map(|s| s.description.len() as f64)
                .sum::<f64>()
                / n_subgroups as f64
        };
        let normalized_std_first = match (dataset.target_kind(), list.subgroups.first()) {
            (ColumnKind::Numeric, Some(first)) => {
                Some(first.statistics[0].std_dev() / list.default_stats()[0].std_dev())
            }
            _ => None,
        };
        Ok(ListSummary {
            n_subgroups,
            avg_conditions,
            swkl: swkl(list, dataset),
            compression_ratio: compression_ratio(dataset, list, ctx)?,
            total_bits: total_length(dataset, list, ctx)?,
            normalized_std_first,
        })
    }
}
