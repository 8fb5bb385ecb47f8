//! Descriptions, subgroups and subgroup lists with their cover semantics.
//!
//! A description is a conjunction of conditions, at most one per variable.
//! In a subgroup list the cover of the i-th subgroup consists of the rows its
//! description matches minus the rows matched by earlier subgroups; rows
//! matched by no subgroup fall to the default rule, whose statistics are the
//! dataset's maximum-likelihood estimates and never change.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::data::{ColumnKind, DataError, Dataset, Item, Predicate};

/// A canonical conjunction of conditions: sorted by column, duplicate-free,
/// at most one condition per variable.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Description {
    conditions: Vec<Item>,
}

impl Description {
    pub fn empty() -> Self {
        Description::default()
    }

    /// Builds the canonical form. Panics if two conditions share a variable;
    /// refinement sites guarantee distinct variables.
    pub fn new(mut conditions: Vec<Item>) -> Self {
        conditions.sort_by_key(|c| c.column);
        assert!(
            conditions.windows(2).all(|w| w[0].column != w[1].column),
            "description conditions must use distinct variables"
        );
        Description { conditions }
    }

    /// Canonical extension by one condition on a fresh variable.
    pub fn refined_with(&self, item: Item) -> Option<Description> {
        if self.conditions_variable(item.column) {
            return None;
        }
        let mut conditions = self.conditions.clone();
        conditions.push(item);
        Some(Description::new(conditions))
    }

    pub fn conditions(&self) -> &[Item] {
        &self.conditions
    }

    pub fn conditions_variable(&self, column: usize) -> bool {
        self.conditions.iter().any(|c| c.column == column)
    }

    /// Number of conditioned variables, |a|.
    pub fn len(&self) -> usize {
        self.conditions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.conditions.is_empty()
    }

    /// True iff every condition holds on the given row. The empty
    /// conjunction matches everything.
    pub fn matches(&self, dataset: &Dataset, row: usize) -> bool {
        self.conditions.iter().all(|c| c.holds(dataset, row))
    }

    /// Human-readable form, e.g. `weight = heavy & 8 ≤ rpm ≤ 13`. Injective
    /// for distinct canonical descriptions, so it doubles as the canonical
    /// key for dedup and tie-breaking.
    pub fn display(&self, dataset: &Dataset) -> String {
        if self.conditions.is_empty() {
            return "(empty)".to_owned();
        }
        let parts: Vec<String> = self
            .conditions
            .iter()
            .map(|c| {
                let var = dataset.column_name(c.column);
                match c.predicate {
                    Predicate::Equals(cat) => {
                        format!("{var} = {}", dataset.category_dict(c.column)[cat as usize])
                    }
                    Predicate::LessEq(cut) => format!("{var} ≤ {cut}"),
                    Predicate::GreaterEq(cut) => format!("{var} ≥ {cut}"),
                    Predicate::Between(low, high) => format!("{low} ≤ {var} ≤ {high}"),
                }
            })
            .collect();
        parts.join(" & ")
    }

    /// JSON form: `{"conditions": [{"var": ..., "op": ..., ...}]}`.
    pub fn to_json(&self, dataset: &Dataset) -> Value {
        let conditions: Vec<Value> = self
            .conditions
            .iter()
            .map(|c| {
                let var = dataset.column_name(c.column);
                match c.predicate {
                    Predicate::Equals(cat) => json!({
                        "var": var,
                        "op": "=",
                        "value": dataset.category_dict(c.column)[cat as usize],
                    }),
                    Predicate::LessEq(cut) => json!({"var": var, "op": "<=", "value": cut}),
                    Predicate::GreaterEq(cut) => json!({"var": var, "op": ">=", "value": cut}),
                    Predicate::Between(low, high) => {
                        json!({"var": var, "op": "between", "low": low, "high": high})
                    }
                }
            })
            .collect();
        json!({ "conditions": conditions })
    }

    pub fn from_json(value: &Value, dataset: &Dataset) -> Result<Description, DataError> {
        let conditions = value
            .get("conditions")
            .and_then(Value::as_array)
            .ok_or_else(|| DataError::UnknownColumn {
                name: "conditions".into(),
            })?;
        let mut items = Vec::with_capacity(conditions.len());
        for cond in conditions {
            let var = cond.get("var").and_then(Value::as_str).unwrap_or_default();
            let column = dataset
                .column_index(var)
                .ok_or_else(|| DataError::UnknownColumn { name: var.into() })?;
            let op = cond.get("op").and_then(Value::as_str).unwrap_or_default();
            let predicate = match op {
                "=" => {
                    let cat_name = cond.get("value").and_then(Value::as_str).unwrap_or_default();
                    let cat = dataset
                        .category_dict(column)
                        .iter()
                        .position(|c| c == cat_name)
                        .ok_or_else(|| DataError::UnknownColumn {
                            name: format!("{var}={cat_name}"),
                        })?;
                    Predicate::Equals(cat as u32)
                }
                "<=" => Predicate::LessEq(number_field(cond, "value")),
                ">=" => Predicate::GreaterEq(number_field(cond, "value")),
                "between" => {
                    Predicate::Between(number_field(cond, "low"), number_field(cond, "high"))
                }
                other => {
                    return Err(DataError::UnknownColumn {
                        name: format!("operator {other:?}"),
                    })
                }
            };
            items.push(Item { column, predicate });
        }
        Ok(Description::new(items))
    }
}

fn number_field(value: &Value, key: &str) -> f64 {
    value.get(key).and_then(Value::as_f64).unwrap_or(f64::NAN)
}

/// Per-target sufficient statistics under the maximum-likelihood estimate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum TargetStatistics {
    Categorical {
        counts: Vec<u64>,
        n: u64,
    },
    /// `variance` is the biased estimator, so `n * variance` equals the
    /// residual sum of squares.
    Normal {
        n: u64,
        mean: f64,
        variance: f64,
    },
}

impl TargetStatistics {
    pub fn n(&self) -> u64 {
        match self {
            TargetStatistics::Categorical { n, .. } => *n,
            TargetStatistics::Normal { n, .. } => *n,
        }
    }

    /// Empirical class probabilities; zeros when the slice is empty.
    pub fn probs(&self) -> Vec<f64> {
        match self {
            TargetStatistics::Categorical { counts, n } => {
                if *n == 0 {
                    vec![0.0; counts.len()]
                } else {
                    counts.iter().map(|&c| c as f64 / *n as f64).collect()
                }
            }
            TargetStatistics::Normal { .. } => panic!("probs() on a normal target"),
        }
    }

    pub fn mean(&self) -> f64 {
        match self {
            TargetStatistics::Normal { mean, .. } => *mean,
            _ => panic!("mean() on a categorical target"),
        }
    }

    pub fn variance(&self) -> f64 {
        match self {
            TargetStatistics::Normal { variance, .. } => *variance,
            _ => panic!("variance() on a categorical target"),
        }
    }

    pub fn std_dev(&self) -> f64 {
        self.variance().sqrt()
    }

    pub fn rss(&self) -> f64 {
        match self {
            TargetStatistics::Normal { n, variance, .. } => *n as f64 * variance,
            _ => panic!("rss() on a categorical target"),
        }
    }
}

/// A gathered slice of one target column, the unit the encodings work on.
#[derive(Clone, Debug)]
pub enum TargetPart {
    Nominal { counts: Vec<u64>, n: u64 },
    Numeric { values: Vec<f64> },
}

impl TargetPart {
    /// Collects the slice of target column `col` over the given rows.
    pub fn gather(dataset: &Dataset, col: usize, rows: impl Iterator<Item = usize>) -> TargetPart {
        match dataset.schema()[col].kind {
            ColumnKind::Nominal => {
                let codes = dataset.nominal_codes(col);
                let mut counts = vec![0u64; dataset.cardinality(col)];
                let mut n = 0u64;
                for row in rows {
                    counts[codes[row] as usize] += 1;
                    n += 1;
                }
                TargetPart::Nominal { counts, n }
            }
            ColumnKind::Numeric => {
                let column = dataset.numeric_values(col);
                TargetPart::Numeric {
                    values: rows.map(|row| column[row]).collect(),
                }
            }
        }
    }

    pub fn n(&self) -> u64 {
        match self {
            TargetPart::Nominal { n, .. } => *n,
            TargetPart::Numeric { values } => values.len() as u64,
        }
    }

    pub fn statistics(&self) -> TargetStatistics {
        match self {
            TargetPart::Nominal { counts, n } => TargetStatistics::Categorical {
                counts: counts.clone(),
                n: *n,
            },
            TargetPart::Numeric { values } => estimate_normal(values),
        }
    }

    /// Numeric slices need at least two distinct values for a finite
    /// unknown-parameter code; nominal slices only need to be nonempty.
    pub fn is_encodable(&self) -> bool {
        match self {
            TargetPart::Nominal { n, .. } => *n > 0,
            TargetPart::Numeric { values } => {
                values.len() >= 2 && values.iter().any(|&v| v != values[0])
            }
        }
    }
}

/// Maximum-likelihood statistics of a target slice: empirical class
/// frequencies for nominal targets, mean and biased variance for numeric.
pub fn estimate_statistics(part: &TargetPart) -> TargetStatistics {
    part.statistics()
}

fn estimate_normal(values: &[f64]) -> TargetStatistics {
    let n = values.len();
    assert!(n >= 1, "normal statistics of an empty slice");
    let mean = values.iter().sum::<f64>() / n as f64;
    let rss: f64 = values.iter().map(|&v| (v - mean) * (v - mean)).sum();
    TargetStatistics::Normal {
        n: n as u64,
        mean,
        variance: rss / n as f64,
    }
}

#[derive(Clone, Debug)]
pub struct Subgroup {
    pub description: Description,
    pub cover_size: usize,
    /// One entry per target variable, recomputed from the cover.
    pub statistics: Vec<TargetStatistics>,
}

/// An ordered subgroup list with its fixed default rule.
#[derive(Clone, Debug)]
pub struct SubgroupList {
    pub subgroups: Vec<Subgroup>,
    /// Full-dataset maximum-likelihood statistics, one per target; immutable
    /// after construction.
    default_stats: Vec<TargetStatistics>,
}

impl SubgroupList {
    /// The empty list over a dataset: no subgroups, default rule only.
    pub fn empty(dataset: &Dataset) -> Self {
        let default_stats = dataset
            .target_indices()
            .into_iter()
            .map(|col| TargetPart::gather(dataset, col, 0..dataset.n()).statistics())
            .collect();
        SubgroupList {
            subgroups: Vec::new(),
            default_stats,
        }
    }

    pub fn default_stats(&self) -> &[TargetStatistics] {
        &self.default_stats
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    /// Splits the row set into per-subgroup covers and the default cover.
    /// The parts are pairwise disjoint and their union is all rows.
    pub fn cover(&self, dataset: &Dataset) -> Cover {
        let mut subgroup_rows = vec![Vec::new(); self.subgroups.len()];
        let mut default_rows = Vec::new();
        for row in 0..dataset.n() {
            match self
                .subgroups
                .iter()
                .position(|s| s.description.matches(dataset, row))
            {
                Some(i) => subgroup_rows[i].push(row as u32),
                None => default_rows.push(row as u32),
            }
        }
        Cover {
            subgroup_rows,
            default_rows,
        }
    }
}

/// The partition induced by a subgroup list.
#[derive(Clone, Debug)]
pub struct Cover {
    pub subgroup_rows: Vec<Vec<u32>>,
    pub default_rows: Vec<u32>,
}
