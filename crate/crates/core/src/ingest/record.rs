use std::collections::BTreeMap;
use std::collections::HashSet;

use thiserror::Error;

use crate::props::MISSING;

/// Days per record in the reference data.
pub const DEFAULT_DAYS: usize = 14;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("line {line}: {message}")]
    Schema { line: usize, message: String },
    #[error("line {line}, column `{column}`: {message}")]
    Invalid {
        line: usize,
        column: String,
        message: String,
    },
    #[error("line {line}: duplicate product_id `{id}`")]
    DuplicateId { line: usize, id: String },
    #[error("records need at least 2 days, got {0}")]
    TooFewDays(usize),
}

impl IngestError {
    /// Whether the error is about file contents rather than I/O.
    pub fn is_data_error(&self) -> bool {
        !matches!(self, IngestError::Io(_))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProductRecord {
    pub product_id: String,
    pub category: String,
    /// Daily positions; `-1` marks a missing day.
    pub positions: Vec<f64>,
    pub impressions: u64,
    pub clicks: u64,
    pub purchases: u64,
}

impl ProductRecord {
    /// Checks the field invariants, reporting the offending column.
    pub(crate) fn validate(&self, days: usize) -> Result<(), (String, String)> {
        if self.product_id.is_empty() {
            return Err(("product_id".into(), "must not be empty".into()));
        }
        if self.category.is_empty() {
            return Err(("category".into(), "must not be empty".into()));
        }
        if self.positions.len() != days {
            return Err((
                "positions".into(),
                format!("expected {days} positions, found {}", self.positions.len()),
            ));
        }
        for (day, &p) in self.positions.iter().enumerate() {
            if !(p.is_finite() && (p >= 1.0 || p == MISSING)) {
                return Err((
                    format!("pos_{day}"),
                    format!("position {p} must be >= 1 or -1 (missing)"),
                ));
            }
        }
        Ok(())
    }

    pub fn has_missing(&self) -> bool {
        self.positions.contains(&MISSING)
    }
}

/// Validated records with unique product ids, all of the same length.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    records: Vec<ProductRecord>,
    category_index: BTreeMap<String, Vec<usize>>,
    days: usize,
}

impl Dataset {
    /// Validates `records`. Errors carry 1-based record numbers as lines.
    pub fn new(records: Vec<ProductRecord>, days: usize) -> Result<Self, IngestError> {
        let mut builder = DatasetBuilder::new(days)?;
        for (i, record) in records.into_iter().enumerate() {
            builder.push(record, i + 1)?;
        }
        Ok(builder.finish())
    }

    pub fn records(&self) -> &[ProductRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn days(&self) -> usize {
        self.days
    }

    /// Record indices per category, categories in sorted order.
    pub fn category_index(&self) -> &BTreeMap<String, Vec<usize>> {
        &self.category_index
    }
}

pub(crate) struct DatasetBuilder {
    records: Vec<ProductRecord>,
    ids: HashSet<String>,
    days: usize,
}

impl DatasetBuilder {
    pub(crate) fn new(days: usize) -> Result<Self, IngestError> {
        if days < 2 {
            return Err(IngestError::TooFewDays(days));
        }
        Ok(Self {
            records: Vec::new(),
            ids: HashSet::new(),
            days,
        })
    }

    pub(crate) fn push(&mut self, record: ProductRecord, line: usize) -> Result<(), IngestError> {
        record
            .validate(self.days)
            .map_err(|(column, message)| IngestError::Invalid {
                line,
                column,
                message,
            })?;
        if !self.ids.insert(record.product_id.clone()) {
            return Err(IngestError::DuplicateId {
                line,
                id: record.product_id,
            });
        }
        self.records.push(record);
        Ok(())
    }

    pub(crate) fn finish(self) -> Dataset {
        let mut category_index: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        for (i, record) in self.records.iter().enumerate() {
            category_index
                .entry(record.category.clone())
                .or_default()
                .push(i);
        }
        Dataset {
            records: self.records,
            category_index,
            days: self.days,
        }
    }
}
