//! Every code length of the two-part MDL criterion.
//!
//! The total is `L(D, M) = L(M) + L(Y | X, M)`. The model part prices the
//! number of subgroups, each description's size, its variable choice and its
//! conditions. The data part encodes the default-rule slice with known
//! parameters and every subgroup slice with an optimal unknown-parameter
//! code. All lengths are in bits.

mod categorical;
mod integers;
mod multinomial;
mod normal;
mod strategy;

pub use categorical::{known_categorical, nml_categorical};
pub use integers::{restricted_integer_code, universal_integer_code, RISSANEN_K0};
pub use multinomial::multinomial_complexity;
pub use normal::{
    bayes_normal, known_normal, known_normal_from_stats, pair_cost, two_point_selection,
    TwoPointSelection,
};
pub use strategy::{
    for_kind, lookup, registry, BayesNormalModel, NmlCategoricalModel, TargetModel,
};

use thiserror::Error;

use crate::data::{ColumnKind, Dataset, Item, ItemUniverse};
use crate::model::{SubgroupList, TargetPart, TargetStatistics};

/// Code length in bits.
pub type Bits = f64;

/// A numeric slice with fewer than two distinct values has no finite
/// unknown-parameter code; the search filters such candidates before
/// scoring, so meeting this error means a caller skipped that filter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
#[error("numeric slice with fewer than two distinct target values cannot be encoded")]
pub struct DegenerateSubgroup;

#[derive(Clone, Copy, Debug)]
enum VariableCode {
    Nominal { cardinality: usize },
    Numeric { n_cuts: usize },
}

#[derive(Clone, Copy, Debug)]
pub struct TargetMeta {
    pub column: usize,
    pub kind: ColumnKind,
    /// Number of classes for nominal targets, 0 for numeric ones.
    pub classes: usize,
}

/// Frozen per-run encoding metadata: variable cardinalities and cut counts,
/// target metadata, the default-rule statistics and the selected target
/// encoding strategy. Identical contexts yield identical code lengths.
pub struct EncodingContext {
    /// Number of explanatory variables.
    pub m: usize,
    variables: Vec<Option<VariableCode>>,
    pub targets: Vec<TargetMeta>,
    pub default_stats: Vec<TargetStatistics>,
    /// Drops the list-length term of the model code; used when mining a
    /// single best subgroup.
    pub top1: bool,
    pub model: &'static dyn TargetModel,
}

impl EncodingContext {
    pub fn new(dataset: &Dataset, universe: &ItemUniverse, top1: bool) -> Self {
        let mut variables = vec![None; dataset.schema().len()];
        for col in dataset.explanatory_indices() {
            variables[col] = Some(match dataset.schema()[col].kind {
                ColumnKind::Nominal => VariableCode::Nominal {
                    cardinality: dataset.cardinality(col),
                },
                ColumnKind::Numeric => VariableCode::Numeric {
                    n_cuts: universe.cuts[col].len(),
                },
            });
        }
        let targets = dataset
            .target_indices()
            .into_iter()
            .map(|column| TargetMeta {
                column,
                kind: dataset.schema()[column].kind,
                classes: match dataset.schema()[column].kind {
                    ColumnKind::Nominal => dataset.cardinality(column),
                    ColumnKind::Numeric => 0,
                },
            })
            .collect();
        let default_stats = dataset
            .target_indices()
            .into_iter()
            .map(|col| TargetPart::gather(dataset, col, 0..dataset.n()).statistics())
            .collect();
        EncodingContext {
            m: dataset.explanatory_indices().len(),
            variables,
            targets,
            default_stats,
            top1,
            model: for_kind(dataset.target_kind()),
        }
    }
}

/// Code length of one condition: `log2 |X_v|` for a nominal variable, and
/// the operator-count code plus a uniform code over the realisable
/// conditions (`2c` one-operator, `c(c-1)/2` two-operator for `c` cuts) for
/// a numeric one.
pub fn condition_length(item: &Item, ctx: &EncodingContext) -> Bits {
    match ctx.variables[item.column].expect("condition on a non-explanatory column") {
        VariableCode::Nominal { cardinality } => (cardinality as f64).log2(),
        VariableCode::Numeric { n_cuts } => {
            assert!(n_cuts >= 1, "condition on a numeric variable without cut points");
            let n_op = item.predicate.n_operators();
            let outcomes = match n_op {
                1 => 2 * n_cuts,
                _ => n_cuts * (n_cuts - 1) / 2,
            };
            assert!(outcomes >= 1, "two-operator condition needs at least two cut points");
            restricted_integer_code(u64::from(n_op)) + (outcomes as f64).log2()
        }
    }
}

/// Model-code cost of one subgroup: size, variable choice, conditions.
pub fn subgroup_cost(description: &crate::model::Description, ctx: &EncodingContext) -> Bits {
    let size = description.len();
    assert!(size >= 1, "subgroups carry at least one condition");
    assert!(size <= ctx.m, "description conditions more variables than exist");
    universal_integer_code(size as u64)
        + log2_binomial(ctx.m as u64, size as u64)
        + description
            .conditions()
            .iter()
            .map(|c| condition_length(c, ctx))
            .sum::<f64>()
}

/// Encoded length of a subgroup list. The empty list costs nothing; the
/// list-length term is charged from the first subgroup on and dropped
/// entirely in top-1 mode.
pub fn model_length(list: &SubgroupList, ctx: &EncodingContext) -> Bits {
    if list.is_empty() {
        return 0.0;
    }
    let header = if ctx.top1 {
        0.0
    } else {
        universal_integer_code(list.len() as u64)
    };
    header
        + list
            .subgroups
            .iter()
            .map(|s| subgroup_cost(&s.description, ctx))
            .sum::<f64>()
}

/// Encoded length of the target data given the cover partition: per target,
/// the known-parameter code of the default slice plus the unknown-parameter
/// code of every subgroup slice.
pub fn data_length(
    dataset: &Dataset,
    list: &SubgroupList,
    ctx: &EncodingContext,
) -> Result<Bits, DegenerateSubgroup> {
    let cover = list.cover(dataset);
    let mut bits = 0.0;
    for (t, meta) in ctx.targets.iter().enumerate() {
        let default_part = TargetPart::gather(
            dataset,
            meta.column,
            cover.default_rows.iter().map(|&r| r as usize),
        );
        bits += ctx.model.known_code(&default_part, &ctx.default_stats[t]);
        for rows in &cover.subgroup_rows {
            if rows.is_empty() {
                continue;
            }
            let part = TargetPart::gather(dataset, meta.column, rows.iter().map(|&r| r as usize));
            bits += ctx.model.unknown_code(&part, &ctx.default_stats[t])?;
        }
    }
    Ok(bits)
}

/// The two-part total `L(D, M) = L(Y | X, M) + L(M)`.
pub fn total_length(
    dataset: &Dataset,
    list: &SubgroupList,
    ctx: &EncodingContext,
) -> Result<Bits, DegenerateSubgroup> {
    Ok(data_length(dataset, list, ctx)? + model_length(list, ctx))
}

/// `log2 binom(n, k)`, exact in integer arithmetic where it fits.
pub fn log2_binomial(n: u64, k: u64) -> f64 {
    assert!(k <= n);
    let k = k.min(n - k);
    let mut value: u128 = 1;
    for i in 0..k {
        match value
            .checked_mul((n - i) as u128)
            .map(|v| v / (i as u128 + 1))
        {
            Some(next) => value = next,
            None => {
                // fall back to log-gamma for astronomically wide schemas
                use statrs::function::gamma::ln_gamma;
                let nf = n as f64;
                let kf = k as f64;
                return (ln_gamma(nf + 1.0) - ln_gamma(kf + 1.0) - ln_gamma(nf - kf + 1.0))
                    * std::f64::consts::LOG2_E;
            }
        }
    }
    (value as f64).log2()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{generate_items, Column, ColumnRole, ColumnSchema, Predicate};
    use crate::model::{Description, Subgroup, SubgroupList};

    fn log2_binom_is_exact() -> f64 {
        log2_binomial(17, 2)
    }

    #[test]
    fn binomial_of_example() {
        assert!((log2_binom_is_exact() - 136f64.log2()).abs() < 1e-12);
    }

    /// 17 explanatory variables, `weight` nominal with three categories,
    /// `consumption-city` numeric with three cut points, one subgroup with
    /// two conditions.
    fn worked_example() -> (Dataset, SubgroupList, EncodingContext) {
        let mut schema = vec![ColumnSchema {
            name: "weight".into(),
            role: ColumnRole::Explanatory,
            kind: ColumnKind::Nominal,
        }];
        let n = 8usize;
        let mut columns = vec![Column::Nominal {
            dict: vec!["heavy".into(), "medium".into(), "light".into()],
            codes: vec![0, 0, 2, 1, 1, 2, 0, 1],
        }];
        // consumption-city with values spread so that 3 cuts survive
        schema.push(ColumnSchema {
            name: "consumption-city".into(),
            role: ColumnRole::Explanatory,
            kind: ColumnKind::Numeric,
        });
        columns.push(Column::Numeric(vec![
            4.0, 6.0, 8.0, 10.0, 12.0, 14.0, 16.0, 18.0,
        ]));
        for j in 0..15 {
            schema.push(ColumnSchema {
                name: format!("pad{j}"),
                role: ColumnRole::Explanatory,
                kind: ColumnKind::Numeric,
            });
            columns.push(Column::Numeric(vec![0.0; n]));
        }
        schema.push(ColumnSchema {
            name: "price".into(),
            role: ColumnRole::Target,
            kind: ColumnKind::Numeric,
        });
        columns.push(Column::Numeric(vec![
            35.0, 20.0, 9.0, 30.0, 18.0, 8.0, 33.0, 21.0,
        ]));
        let dataset = Dataset::new(schema, columns).unwrap();
        let universe = generate_items(&dataset, 3);
        assert_eq!(universe.cuts[1].len(), 3);
        let ctx = EncodingContext::new(&dataset, &universe, false);
        assert_eq!(ctx.m, 17);

        let description = Description::new(vec![
            Item {
                column: 0,
                predicate: Predicate::Equals(0),
            },
            Item {
                column: 1,
                predicate: Predicate::LessEq(universe.cuts[1][0]),
            },
        ]);
        let mut list = SubgroupList::empty(&dataset);
        list.subgroups.push(Subgroup {
            description,
            cover_size: 0,
            statistics: vec![],
        });
        (dataset, list, ctx)
    }

    #[test]
    fn condition_lengths_of_example() {
        let (_, list, ctx) = worked_example();
        let conditions = list.subgroups[0].description.conditions();
        // nominal with three categories
        assert!((condition_length(&conditions[0], &ctx) - 3f64.log2()).abs() < 1e-12);
        // numeric one-operator with three cuts: operator code + log2 6
        let numeric = condition_length(&conditions[1], &ctx);
        assert!((numeric - (restricted_integer_code(1) + 6f64.log2())).abs() < 1e-12);
    }

    #[test]
    fn two_operator_condition_length() {
        let (_, _, ctx) = worked_example();
        let item = Item {
            column: 1,
            predicate: Predicate::Between(0.0, 1.0),
        };
        let expected = restricted_integer_code(2) + 3f64.log2();
        assert!((condition_length(&item, &ctx) - expected).abs() < 1e-12);
    }

    #[test]
    fn model_length_of_example() {
        let (_, list, ctx) = worked_example();
        // L_N(1) + L_N(2) + log2 binom(17,2) + log2 3 + L_{N|2}(1) + log2 6
        let expected = universal_integer_code(1)
            + universal_integer_code(2)
            + log2_binomial(17, 2)
            + 3f64.log2()
            + restricted_integer_code(1)
            + 6f64.log2();
        assert!((model_length(&list, &ctx) - expected).abs() < 1e-12);
        assert!((expected - 15.88).abs() < 0.01, "got {expected}");
    }

    #[test]
    fn empty_list_costs_nothing() {
        let (dataset, _, ctx) = worked_example();
        let list = SubgroupList::empty(&dataset);
        assert_eq!(model_length(&list, &ctx), 0.0);
    }

    #[test]
    fn top1_mode_drops_list_length_term() {
        let (_, list, mut ctx) = worked_example();
        let full = model_length(&list, &ctx);
        ctx.top1 = true;
        let top1 = model_length(&list, &ctx);
        assert!((full - top1 - universal_integer_code(1)).abs() < 1e-12);
    }

    #[test]
    fn adding_a_subgroup_increases_model_length() {
        let (_, mut list, ctx) = worked_example();
        let one = model_length(&list, &ctx);
        let extra = list.subgroups[0].clone();
        list.subgroups.push(extra);
        assert!(model_length(&list, &ctx) > one);
    }

    #[test]
    fn total_is_model_plus_data() {
        let (dataset, list, ctx) = worked_example();
        let total = total_length(&dataset, &list, &ctx).unwrap();
        let split = model_length(&list, &ctx) + data_length(&dataset, &list, &ctx).unwrap();
        assert_eq!(total, split);
    }

    #[test]
    fn empty_list_data_length_is_known_code_of_full_column() {
        let (dataset, _, ctx) = worked_example();
        let list = SubgroupList::empty(&dataset);
        let bits = data_length(&dataset, &list, &ctx).unwrap();
        let stats = &ctx.default_stats[0];
        let expected = known_normal(
            dataset.numeric_values(17),
            stats.mean(),
            stats.std_dev(),
        );
        assert!((bits - expected).abs() < 1e-9);
    }
}
