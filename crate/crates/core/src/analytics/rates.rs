use rayon::prelude::*;

use super::AnalyticsError;
use crate::eval::eval_fast;
use crate::ingest::{to_traceset, Dataset, ProductRecord};
use crate::props::NamedFormula;

#[derive(Debug, Clone, PartialEq)]
pub struct RateRow {
    pub category: String,
    pub property: String,
    pub satisfied: usize,
    pub total: usize,
    pub rate: f64,
}

/// Rows in category order, then library order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RateTable {
    pub rows: Vec<RateRow>,
}

impl RateTable {
    /// `(satisfied, total)` of `property` summed over categories.
    pub fn overall(&self, property: &str) -> (usize, usize) {
        self.rows
            .iter()
            .filter(|r| r.property == property)
            .fold((0, 0), |(s, t), r| (s + r.satisfied, t + r.total))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Metric {
    Impressions,
    Clicks,
    Purchases,
}

impl Metric {
    pub const ALL: [Metric; 3] = [Metric::Impressions, Metric::Clicks, Metric::Purchases];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Impressions => "impressions",
            Metric::Clicks => "clicks",
            Metric::Purchases => "purchases",
        }
    }

    pub fn of(self, record: &ProductRecord) -> u64 {
        match self {
            Metric::Impressions => record.impressions,
            Metric::Clicks => record.clicks,
            Metric::Purchases => record.purchases,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricRow {
    pub property: String,
    pub metric: Metric,
    /// `None` when no record satisfies the property.
    pub mean: Option<f64>,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct MetricTable {
    pub rows: Vec<MetricRow>,
}

/// `verdicts[record][property]`, evaluated in parallel. The result does not
/// depend on the thread count.
pub fn record_verdicts(
    dataset: &Dataset,
    library: &[NamedFormula],
) -> Result<Vec<Vec<bool>>, AnalyticsError> {
    dataset
        .records()
        .par_iter()
        .map(|record| {
            let traces = to_traceset(record);
            library
                .iter()
                .map(|named| {
                    eval_fast(&named.formula, &traces)
                        .map(|v| v.satisfied)
                        .map_err(|source| AnalyticsError::Eval {
                            property: named.name.clone(),
                            record: record.product_id.clone(),
                            source,
                        })
                })
                .collect()
        })
        .collect()
}

pub fn satisfaction_rates(
    dataset: &Dataset,
    library: &[NamedFormula],
) -> Result<RateTable, AnalyticsError> {
    if dataset.is_empty() {
        return Err(AnalyticsError::EmptyDataset);
    }
    let verdicts = record_verdicts(dataset, library)?;
    let mut rows = Vec::with_capacity(dataset.category_index().len() * library.len());
    for (category, members) in dataset.category_index() {
        for (p, named) in library.iter().enumerate() {
            let satisfied = members.iter().filter(|&&i| verdicts[i][p]).count();
            let total = members.len();
            rows.push(RateRow {
                category: category.clone(),
                property: named.name.clone(),
                satisfied,
                total,
                rate: satisfied as f64 / total as f64,
            });
        }
    }
    Ok(RateTable { rows })
}

pub fn metric_distribution(
    dataset: &Dataset,
    library: &[NamedFormula],
) -> Result<MetricTable, AnalyticsError> {
    if dataset.is_empty() {
        return Err(AnalyticsError::EmptyDataset);
    }
    let verdicts = record_verdicts(dataset, library)?;
    let mut rows = Vec::with_capacity(library.len() * Metric::ALL.len());
    for (p, named) in library.iter().enumerate() {
        let members: Vec<&ProductRecord> = dataset
            .records()
            .iter()
            .zip(&verdicts)
            .filter(|(_, v)| v[p])
            .map(|(r, _)| r)
            .collect();
        for metric in Metric::ALL {
            // Integer sums keep the mean independent of summation order.
            let sum: u128 = members.iter().map(|r| u128::from(metric.of(r))).sum();
            rows.push(MetricRow {
                property: named.name.clone(),
                metric,
                mean: (!members.is_empty()).then(|| sum as f64 / members.len() as f64),
                count: members.len(),
            });
        }
    }
    Ok(MetricTable { rows })
}
