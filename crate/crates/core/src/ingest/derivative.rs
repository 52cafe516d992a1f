use crate::props::{DERIVATIVE, MISSING, POSITION};
use crate::trace::{Trace, TraceSet};

use super::ProductRecord;

/// Unit-spaced first difference of a position series.
#[derive(Debug, Clone, PartialEq)]
pub struct Derivative {
    /// `values[i] = x[i+1] - x[i]`, or 0 where either side is missing.
    pub values: Vec<f64>,
    /// Indices of the samples forced to 0 by a neighbouring missing day.
    pub flagged: Vec<usize>,
}

pub fn derivative(positions: &[f64]) -> Derivative {
    let mut flagged = Vec::new();
    let values = positions
        .windows(2)
        .enumerate()
        .map(|(i, pair)| {
            if pair[0] == MISSING || pair[1] == MISSING {
                flagged.push(i);
                0.0
            } else {
                pair[1] - pair[0]
            }
        })
        .collect();
    Derivative { values, flagged }
}

/// Channels `x` (days `0..n`) and `d1(x)` (days `0..n-1`) of a record.
pub fn to_traceset(record: &ProductRecord) -> TraceSet {
    let d = derivative(&record.positions);
    TraceSet::new([
        Trace::daily(POSITION, record.positions.clone()).expect("validated record"),
        Trace::daily(DERIVATIVE, d.values).expect("validated record"),
    ])
    .expect("distinct channel names")
}
