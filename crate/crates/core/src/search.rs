//! Greedy subgroup-list mining: a separate-and-conquer loop that repeatedly
//! appends the best compressing subgroup found by beam search over the rows
//! not yet covered, until no candidate improves the total code length.

use rayon::prelude::*;
use std::cmp::Ordering;
use std::collections::HashSet;

use thiserror::Error;

use crate::bitset::RowSet;
use crate::data::{generate_items, ColumnKind, Dataset, ItemUniverse};
use crate::encoding::{
    subgroup_cost, total_length, universal_integer_code, Bits, DegenerateSubgroup,
    EncodingContext,
};
use crate::model::{Description, Subgroup, SubgroupList, TargetPart, TargetStatistics};

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("configuration error: {0}")]
    Configuration(String),
    #[error(transparent)]
    Degenerate(#[from] DegenerateSubgroup),
}

/// Knobs of the miner. `beta` trades off many small subgroups (1.0,
/// normalised gain) against few large ones (0.0, absolute gain).
#[derive(Clone, Copy, Debug)]
pub struct SearchParams {
    pub task: ColumnKind,
    pub beam_width: usize,
    pub max_depth: usize,
    pub n_cut: usize,
    pub beta: f64,
    /// Stop after the best single subgroup and price the model without the
    /// list-length term.
    pub top1: bool,
    /// Candidates covering fewer rows are discarded.
    pub min_coverage: usize,
}

impl SearchParams {
    /// The standard values: beam width 100, depth 5, five cut points,
    /// normalised gain.
    pub fn standard(task: ColumnKind) -> Self {
        SearchParams {
            task,
            beam_width: 100,
            max_depth: 5,
            n_cut: 5,
            beta: 1.0,
            top1: false,
            min_coverage: 2,
        }
    }

    fn validate(&self, dataset: &Dataset) -> Result<(), SearchError> {
        if self.beam_width == 0 || self.max_depth == 0 || self.n_cut == 0 {
            return Err(SearchError::Configuration(
                "beam width, depth and cut points must be positive".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.beta) || !self.beta.is_finite() {
            return Err(SearchError::Configuration(format!(
                "beta must lie in [0, 1], got {}",
                self.beta
            )));
        }
        if self.task != dataset.target_kind() {
            return Err(SearchError::Configuration(format!(
                "task is {} but the target columns are {}",
                self.task,
                dataset.target_kind()
            )));
        }
        if dataset.target_kind() == ColumnKind::Numeric {
            for col in dataset.target_indices() {
                let stats = TargetPart::gather(dataset, col, 0..dataset.n()).statistics();
                if stats.variance() <= 0.0 {
                    return Err(SearchError::Configuration(format!(
                        "target column {:?} is constant",
                        dataset.column_name(col)
                    )));
                }
            }
        }
        Ok(())
    }
}

/// A scored candidate subgroup: its description, the rows it would cover on
/// the remaining data, and its compression gain.
#[derive(Clone, Debug)]
pub struct Candidate {
    pub description: Description,
    pub cover: RowSet,
    pub n_a: usize,
    pub statistics: Vec<TargetStatistics>,
    pub gain: f64,
    canonical: String,
}

impl Candidate {
    /// Deterministic preference order: higher gain, then fewer conditions,
    /// then the lexicographically smaller canonical form.
    pub fn preference(&self, other: &Candidate) -> Ordering {
        other
            .gain
            .total_cmp(&self.gain)
            .then_with(|| self.description.len().cmp(&other.description.len()))
            .then_with(|| self.canonical.cmp(&other.canonical))
    }
}

/// Compression gain of appending `description` (covering `cover` on the
/// not-yet-covered rows) behind the `list_len` subgroups already accepted:
/// `[L(D, M) - L(D, M + s)] / n_a^beta`. The data part only involves the
/// candidate slice, encoded once under the default distribution and once
/// with the unknown-parameter code; the rest of the default cover cancels.
pub fn compression_gain(
    list_len: usize,
    description: &Description,
    cover: &RowSet,
    dataset: &Dataset,
    ctx: &EncodingContext,
    beta: f64,
) -> Result<f64, DegenerateSubgroup> {
    let parts: Vec<TargetPart> = ctx
        .targets
        .iter()
        .map(|meta| TargetPart::gather(dataset, meta.column, cover.iter()))
        .collect();
    gain_from_parts(list_len, description, &parts, ctx, beta)
}

fn gain_from_parts(
    list_len: usize,
    description: &Description,
    parts: &[TargetPart],
    ctx: &EncodingContext,
    beta: f64,
) -> Result<f64, DegenerateSubgroup> {
    let n_a = parts[0].n();
    debug_assert!(n_a > 0);
    let mut data_saved = 0.0;
    for (part, default) in parts.iter().zip(&ctx.default_stats) {
        data_saved +=
            ctx.model.known_code(part, default) - ctx.model.unknown_code(part, default)?;
    }
    let length_term = if ctx.top1 {
        0.0
    } else {
        universal_integer_code(list_len as u64 + 1)
            - if list_len == 0 {
                0.0
            } else {
                universal_integer_code(list_len as u64)
            }
    };
    let model_added = length_term + subgroup_cost(description, ctx);
    Ok((data_saved - model_added) / (n_a as f64).powf(beta))
}

/// Classic beam search over the uncovered rows. Level one scores every item
/// as a one-condition description; each further level refines the beam with
/// every item on a fresh variable, skipping duplicate canonical forms.
/// Returns the best candidate across all levels, or nothing when no
/// candidate has positive gain.
pub fn beam_search(
    list: &SubgroupList,
    dataset: &Dataset,
    params: &SearchParams,
    universe: &ItemUniverse,
) -> Option<Candidate> {
    let ctx = EncodingContext::new(dataset, universe, params.top1);
    let uncovered = uncovered_rows(list, dataset);
    beam_search_with(list.len(), dataset, params, universe, &ctx, &uncovered)
}

fn uncovered_rows(list: &SubgroupList, dataset: &Dataset) -> RowSet {
    let mut uncovered = RowSet::empty(dataset.n());
    for &row in &list.cover(dataset).default_rows {
        uncovered.insert(row as usize);
    }
    uncovered
}

fn beam_search_with(
    list_len: usize,
    dataset: &Dataset,
    params: &SearchParams,
    universe: &ItemUniverse,
    ctx: &EncodingContext,
    uncovered: &RowSet,
) -> Option<Candidate> {
    // d_max never exceeds the number of explanatory variables
    let depth_cap = params.max_depth.min(ctx.m);
    let mut best: Option<Candidate> = None;
    let mut beam: Vec<Candidate> = Vec::new();

    for depth in 1..=depth_cap {
        // (description, item cover, cover to intersect it with)
        let jobs: Vec<(Description, &RowSet, &RowSet)> = if depth == 1 {
            universe
                .items
                .iter()
                .enumerate()
                .map(|(i, item)| {
                    (
                        Description::new(vec![*item]),
                        &universe.covers[i],
                        uncovered,
                    )
                })
                .collect()
        } else {
            let mut seen = HashSet::new();
            let mut refinements = Vec::new();
            for member in &beam {
                for (i, item) in universe.items.iter().enumerate() {
                    let Some(refined) = member.description.refined_with(*item) else {
                        continue;
                    };
                    if seen.insert(refined.display(dataset)) {
                        refinements.push((refined, &universe.covers[i], &member.cover));
                    }
                }
            }
            refinements
        };

        let mut level: Vec<Candidate> = jobs
            .into_par_iter()
            .filter_map(|(desc, item_cover, base)| {
                score_candidate(desc, item_cover.and(base), dataset, params, ctx, list_len)
            })
            .collect();
        if level.is_empty() {
            break;
        }
        level.sort_unstable_by(Candidate::preference);
        level.truncate(params.beam_width);
        if best
            .as_ref()
            .is_none_or(|b| level[0].preference(b) == Ordering::Less)
        {
            best = Some(level[0].clone());
        }
        beam = level;
    }

    best.filter(|c| c.gain > 0.0)
}

fn score_candidate(
    description: Description,
    cover: RowSet,
    dataset: &Dataset,
    params: &SearchParams,
    ctx: &EncodingContext,
    list_len: usize,
) -> Option<Candidate> {
    let n_a = cover.count();
    if n_a < params.min_coverage {
        return None;
    }
    let parts: Vec<TargetPart> = ctx
        .targets
        .iter()
        .map(|meta| TargetPart::gather(dataset, meta.column, cover.iter()))
        .collect();
    if !parts.iter().all(TargetPart::is_encodable) {
        return None;
    }
    let gain = gain_from_parts(list_len, &description, &parts, ctx, params.beta)
        .expect("encodable parts always score");
    let statistics = parts.iter().map(TargetPart::statistics).collect();
    let canonical = description.display(dataset);
    Some(Candidate {
        description,
        cover,
        n_a,
        statistics,
        gain,
        canonical,
    })
}

/// Result of a mining run: the list plus the per-iteration gains and total
/// code lengths (starting with the empty list's total).
#[derive(Clone, Debug)]
pub struct Discovery {
    pub list: SubgroupList,
    pub insertion_gains: Vec<f64>,
    pub total_bits_trace: Vec<Bits>,
}

impl Discovery {
    pub fn total_bits(&self) -> Bits {
        *self
            .total_bits_trace
            .last()
            .expect("trace holds at least the empty-list total")
    }
}

/// The mining loop: starting from the empty list, repeatedly run beam
/// search on the rows not yet covered and append the best subgroup while its
/// compression gain is positive. In top-1 mode a single subgroup is mined
/// with the list-length term dropped from the model code.
pub fn ssd_plus_plus(dataset: &Dataset, params: &SearchParams) -> Result<Discovery, SearchError> {
    params.validate(dataset)?;
    let universe = generate_items(dataset, params.n_cut);
    let ctx = EncodingContext::new(dataset, &universe, params.top1);

    let mut list = SubgroupList::empty(dataset);
    let mut uncovered = RowSet::full(dataset.n());
    let mut insertion_gains = Vec::new();
    let mut total_bits_trace = vec![total_length(dataset, &list, &ctx)?];

    loop {
        let found = beam_search_with(
            list.len(),
            dataset,
            params,
            &universe,
            &ctx,
            &uncovered,
        );
        let Some(candidate) = found else { break };
        uncovered.subtract(&candidate.cover);
        insertion_gains.push(candidate.gain);
        list.subgroups.push(Subgroup {
            description: candidate.description,
            cover_size: candidate.n_a,
            statistics: candidate.statistics,
        });
        total_bits_trace.push(total_length(dataset, &list, &ctx)?);
        if params.top1 {
            break;
        }
    }

    Ok(Discovery {
        list,
        insertion_gains,
        total_bits_trace,
    })
}
