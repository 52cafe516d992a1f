//! Dataset-level analyses.
//!
//! * [`satisfaction_rates`]: fraction of records satisfying each formula,
//!   per category.
//! * [`metric_distribution`]: mean impressions, clicks and purchases of the
//!   records satisfying each formula.
//! * [`expand_propositional`] / [`expand_query`]: a formula grounded over a
//!   fixed horizon, to compare its size against the temporal form.
//! * [`cluster_kmeans`]: Lloyd's k-means over position vectors.

mod expand;
mod kmeans;
mod rates;
mod report;

pub use report::{verdicts_csv, UNDEFINED};

use thiserror::Error;

use crate::eval::EvalError;

pub use expand::{
    eval_ground, expand_propositional, expand_query, ground, ExpansionReport, ExpansionTarget,
    Prop, MAX_GROUND_NODES,
};
pub use kmeans::{cluster_kmeans, impute, kmeans, KMeansResult};
pub use rates::{
    metric_distribution, record_verdicts, satisfaction_rates, Metric, MetricRow, MetricTable,
    RateRow, RateTable,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalyticsError {
    #[error("the dataset has no records")]
    EmptyDataset,
    #[error("evaluating `{property}` on record `{record}`: {source}")]
    Eval {
        property: String,
        record: String,
        source: EvalError,
    },
    #[error("k = {k} is invalid for {points} clusterable records")]
    InvalidK { k: usize, points: usize },
    #[error("expansion horizon must be at least 1 day")]
    EmptyHorizon,
    #[error("grounded formula exceeds {limit} nodes at horizon {horizon}")]
    NotExpandable { horizon: usize, limit: usize },
    #[error(transparent)]
    Ground(#[from] EvalError),
}
