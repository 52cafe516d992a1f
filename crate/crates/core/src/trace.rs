//! Sampled signals.
//!
//! A [`Trace`] is one named channel sampled at strictly increasing integer
//! days. A [`TraceSet`] groups channels that are evaluated together.
//!
//! Channels in a set are not required to share a time grid: the derivative
//! channel `d1(x)` of a 14-day position channel `x` has 13 samples. A formula
//! is evaluated over the sample times common to the channels it references
//! (see [`TraceSet::domain`]).

use std::collections::BTreeMap;

use thiserror::Error;

/// Sample time, in days.
pub type Day = u64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("trace `{0}` has no samples")]
    Empty(String),
    #[error("trace `{name}`: {times} times but {values} values")]
    LengthMismatch {
        name: String,
        times: usize,
        values: usize,
    },
    #[error("trace `{name}`: sample times must be strictly increasing (index {index})")]
    NotIncreasing { name: String, index: usize },
    #[error("trace `{name}`: value at index {index} is not finite")]
    NonFinite { name: String, index: usize },
    #[error("duplicate channel `{0}`")]
    DuplicateChannel(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    name: String,
    times: Vec<Day>,
    values: Vec<f64>,
}

impl Trace {
    pub fn new(
        name: impl Into<String>,
        times: Vec<Day>,
        values: Vec<f64>,
    ) -> Result<Self, TraceError> {
        let name = name.into();
        if times.len() != values.len() {
            return Err(TraceError::LengthMismatch {
                name,
                times: times.len(),
                values: values.len(),
            });
        }
        if times.is_empty() {
            return Err(TraceError::Empty(name));
        }
        if let Some(index) = times.windows(2).position(|w| w[0] >= w[1]) {
            return Err(TraceError::NotIncreasing {
                name,
                index: index + 1,
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(TraceError::NonFinite { name, index });
        }
        Ok(Self {
            name,
            times,
            values,
        })
    }

    /// A trace sampled at days `0..values.len()`.
    pub fn daily(name: impl Into<String>, values: Vec<f64>) -> Result<Self, TraceError> {
        let times = (0..values.len() as Day).collect();
        Self::new(name, times, values)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn times(&self) -> &[Day] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Value at sample time `t`, if `t` is one of this trace's sample times.
    pub fn value_at(&self, t: Day) -> Option<f64> {
        self.times
            .binary_search(&t)
            .ok()
            .map(|index| self.values[index])
    }
}

/// A set of uniquely named channels.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TraceSet {
    traces: BTreeMap<String, Trace>,
}

impl TraceSet {
    pub fn new(traces: impl IntoIterator<Item = Trace>) -> Result<Self, TraceError> {
        let mut map = BTreeMap::new();
        for trace in traces {
            if map.contains_key(trace.name()) {
                return Err(TraceError::DuplicateChannel(trace.name().to_owned()));
            }
            map.insert(trace.name().to_owned(), trace);
        }
        Ok(Self { traces: map })
    }

    pub fn get(&self, channel: &str) -> Option<&Trace> {
        self.traces.get(channel)
    }

    pub fn channels(&self) -> impl Iterator<Item = &str> {
        self.traces.keys().map(String::as_str)
    }

    pub fn traces(&self) -> impl Iterator<Item = &Trace> {
        self.traces.values()
    }

    pub fn is_empty(&self) -> bool {
        self.traces.is_empty()
    }

    /// Sorted union of all sample times.
    pub fn grid(&self) -> Vec<Day> {
        let mut all: Vec<Day> = self
            .traces
            .values()
            .flat_map(|trace| trace.times().iter().copied())
            .collect();
        all.sort_unstable();
        all.dedup();
        all
    }

    /// Sample times shared by every channel in `channels`, or the whole grid
    /// when `channels` is empty. Unknown channels are skipped; callers
    /// resolve them first.
    pub fn domain<'a>(&self, channels: impl IntoIterator<Item = &'a str>) -> Vec<Day> {
        let mut domain: Option<Vec<Day>> = None;
        for name in channels {
            let Some(trace) = self.get(name) else {
                continue;
            };
            domain = Some(match domain {
                None => trace.times().to_vec(),
                Some(current) => intersect_sorted(&current, trace.times()),
            });
        }
        domain.unwrap_or_else(|| self.grid())
    }
}

fn intersect_sorted(a: &[Day], b: &[Day]) -> Vec<Day> {
    let mut out = Vec::with_capacity(a.len().min(b.len()));
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_traces() {
        assert!(matches!(
            Trace::new("x", vec![], vec![]),
            Err(TraceError::Empty(_))
        ));
        assert!(matches!(
            Trace::new("x", vec![0, 0], vec![1.0, 2.0]),
            Err(TraceError::NotIncreasing { index: 1, .. })
        ));
        assert!(matches!(
            Trace::new("x", vec![0, 1], vec![1.0]),
            Err(TraceError::LengthMismatch { .. })
        ));
        assert!(matches!(
            Trace::daily("x", vec![1.0, f64::NAN]),
            Err(TraceError::NonFinite { index: 1, .. })
        ));
    }

    #[test]
    fn sentinel_is_a_legal_value() {
        let trace = Trace::daily("x", vec![3.0, -1.0, 3.0]).unwrap();
        assert_eq!(trace.value_at(1), Some(-1.0));
        assert_eq!(trace.value_at(3), None);
    }

    #[test]
    fn domain_intersects_referenced_channels() {
        let x = Trace::daily("x", vec![1.0; 5]).unwrap();
        let dx = Trace::daily("d1(x)", vec![0.0; 4]).unwrap();
        let sparse = Trace::new("y", vec![1, 3, 7], vec![0.0; 3]).unwrap();
        let set = TraceSet::new([x, dx, sparse]).unwrap();

        assert_eq!(set.domain(["x"]), vec![0, 1, 2, 3, 4]);
        assert_eq!(set.domain(["x", "d1(x)"]), vec![0, 1, 2, 3]);
        assert_eq!(set.domain(["x", "y"]), vec![1, 3]);
        assert_eq!(set.domain([]), vec![0, 1, 2, 3, 4, 7]);
    }

    #[test]
    fn duplicate_channels_rejected() {
        let a = Trace::daily("x", vec![1.0]).unwrap();
        let b = Trace::daily("x", vec![2.0]).unwrap();
        assert_eq!(
            TraceSet::new([a, b]),
            Err(TraceError::DuplicateChannel("x".into()))
        );
    }
}
