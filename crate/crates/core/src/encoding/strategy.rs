//! Target-encoding strategies behind a common trait.
//!
//! Each target kind comes with its own pair of data codes (known-parameter
//! for the default rule, unknown-parameter for subgroups) and its own KL
//! divergence. The variants are registered by name so the front end can
//! select one at runtime from the task configuration.

use crate::data::ColumnKind;
use crate::metrics::{kl_categorical, kl_normal_full};
use crate::model::{TargetPart, TargetStatistics};

use super::categorical::{known_categorical, nml_categorical};
use super::normal::{bayes_normal, known_normal, two_point_selection};
use super::{Bits, DegenerateSubgroup};

/// One target-encoding variant: how slices of a single target variable are
/// encoded and compared against the dataset distribution.
pub trait TargetModel: Send + Sync {
    /// Registry name, also the CLI task name.
    fn name(&self) -> &'static str;

    fn target_kind(&self) -> ColumnKind;

    /// Code length of a slice under the fixed default-rule parameters.
    fn known_code(&self, part: &TargetPart, default: &TargetStatistics) -> Bits;

    /// Optimal unknown-parameter code length of a slice covered by a
    /// subgroup.
    fn unknown_code(
        &self,
        part: &TargetPart,
        default: &TargetStatistics,
    ) -> Result<Bits, DegenerateSubgroup>;

    /// KL divergence from subgroup statistics to the default statistics, in
    /// bits.
    fn kl(&self, stats: &TargetStatistics, default: &TargetStatistics) -> f64;
}

/// NML code for categorical targets.
pub struct NmlCategoricalModel;

impl TargetModel for NmlCategoricalModel {
    fn name(&self) -> &'static str {
        "nominal"
    }

    fn target_kind(&self) -> ColumnKind {
        ColumnKind::Nominal
    }

    fn known_code(&self, part: &TargetPart, default: &TargetStatistics) -> Bits {
        match part {
            TargetPart::Nominal { counts, .. } => known_categorical(counts, &default.probs()),
            TargetPart::Numeric { .. } => panic!("categorical code on a numeric slice"),
        }
    }

    fn unknown_code(
        &self,
        part: &TargetPart,
        _default: &TargetStatistics,
    ) -> Result<Bits, DegenerateSubgroup> {
        match part {
            TargetPart::Nominal { counts, .. } => Ok(nml_categorical(counts, counts.len())),
            TargetPart::Numeric { .. } => panic!("categorical code on a numeric slice"),
        }
    }

    fn kl(&self, stats: &TargetStatistics, default: &TargetStatistics) -> f64 {
        kl_categorical(&stats.probs(), &default.probs())
    }
}

/// Two-point-conditioned Bayesian code for numeric targets.
pub struct BayesNormalModel;

impl TargetModel for BayesNormalModel {
    fn name(&self) -> &'static str {
        "numeric"
    }

    fn target_kind(&self) -> ColumnKind {
        ColumnKind::Numeric
    }

    fn known_code(&self, part: &TargetPart, default: &TargetStatistics) -> Bits {
        match part {
            TargetPart::Numeric { values } => {
                known_normal(values, default.mean(), default.std_dev())
            }
            TargetPart::Nominal { .. } => panic!("normal code on a nominal slice"),
        }
    }

    fn unknown_code(
        &self,
        part: &TargetPart,
        default: &TargetStatistics,
    ) -> Result<Bits, DegenerateSubgroup> {
        match part {
            TargetPart::Numeric { values } => {
                let picked = two_point_selection(values, default.mean(), default.std_dev())?;
                let stats = part.statistics();
                bayes_normal(stats.n(), stats.variance(), picked.cost)
            }
            TargetPart::Nominal { .. } => panic!("normal code on a nominal slice"),
        }
    }

    fn kl(&self, stats: &TargetStatistics, default: &TargetStatistics) -> f64 {
        kl_normal_full(
            stats.mean(),
            stats.std_dev(),
            default.mean(),
            default.std_dev(),
        )
    }
}

static NOMINAL: NmlCategoricalModel = NmlCategoricalModel;
static NUMERIC: BayesNormalModel = BayesNormalModel;

/// All registered target-encoding strategies.
pub fn registry() -> &'static [&'static dyn TargetModel] {
    static ALL: [&dyn TargetModel; 2] = [&NOMINAL, &NUMERIC];
    &ALL
}

/// Looks a strategy up by its registered name.
pub fn lookup(name: &str) -> Option<&'static dyn TargetModel> {
    registry().iter().copied().find(|m| m.name() == name)
}

/// Strategy matching a target column kind.
pub fn for_kind(kind: ColumnKind) -> &'static dyn TargetModel {
    match kind {
        ColumnKind::Nominal => &NOMINAL,
        ColumnKind::Numeric => &NUMERIC,
    }
}
