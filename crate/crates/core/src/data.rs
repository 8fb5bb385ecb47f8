//! Typed columnar datasets, CSV loading, equal-frequency discretisation and
//! the item universe (all single conditions) used by the search.

use std::collections::HashSet;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset::RowSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ColumnRole {
    Explanatory,
    Target,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ColumnKind {
    Nominal,
    Numeric,
}

impl fmt::Display for ColumnKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColumnKind::Nominal => write!(f, "nominal"),
            ColumnKind::Numeric => write!(f, "numeric"),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ColumnSchema {
    pub name: String,
    pub role: ColumnRole,
    pub kind: ColumnKind,
}

/// Column storage. Nominal columns carry a category dictionary in
/// first-appearance order; cells hold indices into it.
#[derive(Clone, Debug)]
pub enum Column {
    Nominal { dict: Vec<String>, codes: Vec<u32> },
    Numeric(Vec<f64>),
}

impl Column {
    pub fn len(&self) -> usize {
        match self {
            Column::Nominal { codes, .. } => codes.len(),
            Column::Numeric(values) => values.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Error)]
pub enum DataError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("missing value at row {row}, column {column}")]
    MissingValue { row: usize, column: String },
    #[error("cannot parse {value:?} as a number at row {row}, column {column}")]
    UnparseableNumber {
        row: usize,
        column: String,
        value: String,
    },
    #[error("non-finite number at row {row}, column {column}")]
    NonFinite { row: usize, column: String },
    #[error("target columns must all be nominal or all numeric")]
    MixedTargetKinds,
    #[error("unknown column {name:?} in schema config")]
    UnknownColumn { name: String },
    #[error("duplicate column name {name:?}")]
    DuplicateColumn { name: String },
    #[error("dataset must contain at least one row")]
    EmptyDataset,
    #[error("schema declares no target column")]
    NoTargets,
    #[error("schema config does not cover column {name:?}")]
    SchemaMismatch { name: String },
}

/// How to assign roles and kinds to CSV columns. Either every column is
/// declared explicitly, or targets are named and the rest is inferred
/// (numeric when all cells parse as finite reals, nominal otherwise).
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SchemaConfig {
    Explicit {
        columns: Vec<ColumnSchema>,
    },
    Inferred {
        targets: Vec<String>,
        target_kind: ColumnKind,
        #[serde(default)]
        nominal_explanatory: Vec<String>,
    },
}

impl SchemaConfig {
    pub fn inferred(targets: Vec<String>, target_kind: ColumnKind) -> Self {
        SchemaConfig::Inferred {
            targets,
            target_kind,
            nominal_explanatory: Vec::new(),
        }
    }
}

/// An immutable typed table with declared explanatory and target columns.
#[derive(Clone, Debug)]
pub struct Dataset {
    schema: Vec<ColumnSchema>,
    columns: Vec<Column>,
    n: usize,
}

impl Dataset {
    /// Builds a dataset from parts, enforcing the structural invariants:
    /// unique column names, equal column lengths, at least one row, at least
    /// one target, and targets of a single kind.
    pub fn new(schema: Vec<ColumnSchema>, columns: Vec<Column>) -> Result<Self, DataError> {
        let mut seen = HashSet::new();
        for col in &schema {
            if !seen.insert(col.name.clone()) {
                return Err(DataError::DuplicateColumn {
                    name: col.name.clone(),
                });
            }
        }
        let n = columns.first().map_or(0, Column::len);
        if n == 0 {
            return Err(DataError::EmptyDataset);
        }
        assert_eq!(schema.len(), columns.len(), "schema/column count mismatch");
        for col in &columns {
            assert_eq!(col.len(), n, "ragged columns");
        }
        let target_kinds: Vec<ColumnKind> = schema
            .iter()
            .filter(|c| c.role == ColumnRole::Target)
            .map(|c| c.kind)
            .collect();
        if target_kinds.is_empty() {
            return Err(DataError::NoTargets);
        }
        if target_kinds.windows(2).any(|w| w[0] != w[1]) {
            return Err(DataError::MixedTargetKinds);
        }
        Ok(Dataset { schema, columns, n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn schema(&self) -> &[ColumnSchema] {
        &self.schema
    }

    pub fn column(&self, idx: usize) -> &Column {
        &self.columns[idx]
    }

    pub fn column_name(&self, idx: usize) -> &str {
        &self.schema[idx].name
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.schema.iter().position(|c| c.name == name)
    }

    pub fn explanatory_indices(&self) -> Vec<usize> {
        (0..self.schema.len())
            .filter(|&i| self.schema[i].role == ColumnRole::Explanatory)
            .collect()
    }

    pub fn target_indices(&self) -> Vec<usize> {
        (0..self.schema.len())
            .filter(|&i| self.schema[i].role == ColumnRole::Target)
            .collect()
    }

    /// Kind shared by all target columns.
    pub fn target_kind(&self) -> ColumnKind {
        self.schema[self.target_indices()[0]].kind
    }

    pub fn numeric_values(&self, idx: usize) -> &[f64] {
        match &self.columns[idx] {
            Column::Numeric(values) => values,
            _ => panic!("column {} is not numeric", self.schema[idx].name),
        }
    }

    pub fn nominal_codes(&self, idx: usize) -> &[u32] {
        match &self.columns[idx] {
            Column::Nominal { codes, .. } => codes,
            _ => panic!("column {} is not nominal", self.schema[idx].name),
        }
    }

    pub fn category_dict(&self, idx: usize) -> &[String] {
        match &self.columns[idx] {
            Column::Nominal { dict, .. } => dict,
            _ => panic!("column {} is not nominal", self.schema[idx].name),
        }
    }

    /// Category count of a nominal column.
    pub fn cardinality(&self, idx: usize) -> usize {
        self.category_dict(idx).len()
    }
}

/// Loads an RFC-4180 CSV with a header row. Rows with missing values are
/// rejected, as are numeric cells that do not parse to finite reals.
pub fn load_csv(path: impl AsRef<Path>, config: &SchemaConfig) -> Result<Dataset, DataError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(false)
        .from_path(path.as_ref())?;
    let header: Vec<String> = reader.headers()?.iter().map(str::to_owned).collect();
    let mut records = Vec::new();
    for record in reader.records() {
        records.push(record?);
    }
    if records.is_empty() {
        return Err(DataError::EmptyDataset);
    }

    let schema = resolve_schema(&header, &records, config)?;
    let mut columns = Vec::with_capacity(schema.len());
    for (col_idx, col_schema) in schema.iter().enumerate() {
        columns.push(parse_column(&records, col_idx, col_schema)?);
    }
    Dataset::new(schema, columns)
}

fn resolve_schema(
    header: &[String],
    records: &[csv::StringRecord],
    config: &SchemaConfig,
) -> Result<Vec<ColumnSchema>, DataError> {
    match config {
        SchemaConfig::Explicit { columns } => {
            for name in header {
                if !columns.iter().any(|c| &c.name == name) {
                    return Err(DataError::SchemaMismatch { name: name.clone() });
                }
            }
            // keep file column order
            header
                .iter()
                .map(|name| {
                    columns
                        .iter()
                        .find(|c| &c.name == name)
                        .cloned()
                        .ok_or_else(|| DataError::SchemaMismatch { name: name.clone() })
                })
                .collect()
        }
        SchemaConfig::Inferred {
            targets,
            target_kind,
            nominal_explanatory,
        } => {
            for name in targets.iter().chain(nominal_explanatory) {
                if !header.contains(name) {
                    return Err(DataError::UnknownColumn { name: name.clone() });
                }
            }
            header
                .iter()
                .enumerate()
                .map(|(idx, name)| {
                    let (role, kind) = if targets.contains(name) {
                        (ColumnRole::Target, *target_kind)
                    } else if nominal_explanatory.contains(name) {
                        (ColumnRole::Explanatory, ColumnKind::Nominal)
                    } else if all_cells_numeric(records, idx) {
                        (ColumnRole::Explanatory, ColumnKind::Numeric)
                    } else {
                        (ColumnRole::Explanatory, ColumnKind::Nominal)
                    };
                    Ok(ColumnSchema {
                        name: name.clone(),
                        role,
                        kind,
                    })
                })
                .collect()
        }
    }
}

fn all_cells_numeric(records: &[csv::StringRecord], idx: usize) -> bool {
    records.iter().all(|r| {
        r.get(idx)
            .is_some_and(|cell| !cell.is_empty() && cell.parse::<f64>().is_ok_and(f64::is_finite))
    })
}

fn parse_column(
    records: &[csv::StringRecord],
    idx: usize,
    schema: &ColumnSchema,
) -> Result<Column, DataError> {
    match schema.kind {
        ColumnKind::Numeric => {
            let mut values = Vec::with_capacity(records.len());
            for (row, record) in records.iter().enumerate() {
                let cell = record.get(idx).unwrap_or("");
                if cell.is_empty() {
                    return Err(DataError::MissingValue {
                        row: row + 1,
                        column: schema.name.clone(),
                    });
                }
                let value: f64 = cell.parse().map_err(|_| DataError::UnparseableNumber {
                    row: row + 1,
                    column: schema.name.clone(),
                    value: cell.to_owned(),
                })?;
                if !value.is_finite() {
                    return Err(DataError::NonFinite {
                        row: row + 1,
                        column: schema.name.clone(),
                    });
                }
                values.push(value);
            }
            Ok(Column::Numeric(values))
        }
        ColumnKind::Nominal => {
            let mut dict: Vec<String> = Vec::new();
            let mut codes = Vec::with_capacity(records.len());
            for (row, record) in records.iter().enumerate() {
                let cell = record.get(idx).unwrap_or("");
                if cell.is_empty() {
                    return Err(DataError::MissingValue {
                        row: row + 1,
                        column: schema.name.clone(),
                    });
                }
                let code = match dict.iter().position(|c| c == cell) {
                    Some(pos) => pos as u32,
                    None => {
                        dict.push(cell.to_owned());
                        (dict.len() - 1) as u32
                    }
                };
                codes.push(code);
            }
            Ok(Column::Nominal { dict, codes })
        }
    }
}

/// Equal-frequency cut points: at most `n_cut` distinct values taken from the
/// sorted array at ranks `ceil(i * n / (n_cut + 1))` for `i = 1..=n_cut`
/// (zero-based, clamped to the last element). A constant column yields no
/// cuts. Cut points are computed once on the full dataset and frozen for the
/// whole run.
pub fn equal_frequency_cutpoints(values: &[f64], n_cut: usize) -> Vec<f64> {
    assert!(!values.is_empty(), "cut points of an empty column");
    assert!(n_cut >= 1, "n_cut must be positive");
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    if sorted[0] == sorted[n - 1] {
        return Vec::new();
    }
    let mut cuts = Vec::with_capacity(n_cut);
    for i in 1..=n_cut {
        let rank = (i * n).div_ceil(n_cut + 1).min(n - 1);
        let cut = sorted[rank];
        if cuts.last() != Some(&cut) {
            cuts.push(cut);
        }
    }
    cuts
}

/// A single condition on one explanatory variable.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Predicate {
    Equals(u32),
    LessEq(f64),
    GreaterEq(f64),
    Between(f64, f64),
}

impl Predicate {
    pub fn n_operators(&self) -> u8 {
        match self {
            Predicate::Between(..) => 2,
            _ => 1,
        }
    }

    /// Interval predicates are closed on both ends.
    pub fn holds_numeric(&self, v: f64) -> bool {
        match *self {
            Predicate::LessEq(cut) => v <= cut,
            Predicate::GreaterEq(cut) => v >= cut,
            Predicate::Between(low, high) => low <= v && v <= high,
            Predicate::Equals(_) => false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Item {
    pub column: usize,
    pub predicate: Predicate,
}

impl Item {
    pub fn holds(&self, dataset: &Dataset, row: usize) -> bool {
        match self.predicate {
            Predicate::Equals(cat) => dataset.nominal_codes(self.column)[row] == cat,
            _ => self
                .predicate
                .holds_numeric(dataset.numeric_values(self.column)[row]),
        }
    }
}

/// All items of a dataset plus their full-data covers and the frozen cut
/// points per column.
#[derive(Clone, Debug)]
pub struct ItemUniverse {
    pub items: Vec<Item>,
    pub covers: Vec<RowSet>,
    /// Indexed by dataset column; empty for nominal and target columns.
    pub cuts: Vec<Vec<f64>>,
}

impl ItemUniverse {
    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

/// Generates the item universe in deterministic order: columns in schema
/// order; per nominal column one equality item per category; per numeric
/// column with cuts `c1 < c2 < ...` the one-operator items `x <= c1`,
/// `x >= c1`, `x <= c2`, ... followed by every `ci <= x <= cj` pair.
/// Items covering no row are dropped.
pub fn generate_items(dataset: &Dataset, n_cut: usize) -> ItemUniverse {
    let n = dataset.n();
    let mut cuts = vec![Vec::new(); dataset.schema().len()];
    let mut items = Vec::new();

    for col in dataset.explanatory_indices() {
        match dataset.column(col) {
            Column::Nominal { dict, .. } => {
                for cat in 0..dict.len() as u32 {
                    items.push(Item {
                        column: col,
                        predicate: Predicate::Equals(cat),
                    });
                }
            }
            Column::Numeric(values) => {
                let col_cuts = equal_frequency_cutpoints(values, n_cut);
                for &cut in &col_cuts {
                    items.push(Item {
                        column: col,
                        predicate: Predicate::LessEq(cut),
                    });
                    items.push(Item {
                        column: col,
                        predicate: Predicate::GreaterEq(cut),
                    });
                }
                for (i, &low) in col_cuts.iter().enumerate() {
                    for &high in &col_cuts[i + 1..] {
                        items.push(Item {
                            column: col,
                            predicate: Predicate::Between(low, high),
                        });
                    }
                }
                cuts[col] = col_cuts;
            }
        }
    }

    let mut kept = Vec::with_capacity(items.len());
    let mut covers = Vec::with_capacity(items.len());
    for item in items {
        let mut cover = RowSet::empty(n);
        for row in 0..n {
            if item.holds(dataset, row) {
                cover.insert(row);
            }
        }
        if !cover.is_empty() {
            kept.push(item);
            covers.push(cover);
        }
    }

    ItemUniverse {
        items: kept,
        covers,
        cuts,
    }
}
