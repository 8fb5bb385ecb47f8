//! Discovery of subgroup lists from tabular data with the Minimum
//! Description Length principle.
//!
//! A subgroup list is an ordered set of rules ("subgroups"), each a
//! conjunction of conditions on explanatory variables, followed by a fixed
//! default rule that holds the dataset's marginal target distribution.
//! The best list is the one minimising the two-part code
//! `L(D, M) = L(Y | X, M) + L(M)`, where target data covered by a subgroup
//! is encoded with an optimal unknown-parameter code (normalised maximum
//! likelihood for categorical targets, a Bayesian code for normal targets)
//! and the remainder is encoded under the marginal distribution.
//!
//! The [`search`] module implements the greedy separate-and-conquer miner
//! with beam search for candidate generation; [`encoding`] holds every code
//! length; [`metrics`] the quality measures (WKL, SWKL, compression ratio).

pub mod bitset;
pub mod data;
pub mod encoding;
pub mod metrics;
pub mod model;
pub mod search;

pub use bitset::RowSet;
pub use data::{ColumnKind, ColumnRole, ColumnSchema, DataError, Dataset, Item, Predicate};
pub use encoding::{Bits, EncodingContext};
pub use model::{Description, Subgroup, SubgroupList, TargetStatistics};
pub use search::{Discovery, SearchParams};
