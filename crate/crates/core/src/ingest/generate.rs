use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Poisson};
use thiserror::Error;

use super::record::DatasetBuilder;
use super::{Dataset, IngestError, ProductRecord, DEFAULT_DAYS};
use crate::props::MISSING;

/// Shape planted in a synthetic record.
///
/// With zero noise each shape satisfies one library property by
/// construction: `flat` gives flat_start(3,1), `cold` cold_start(3),
/// `warm` warm_start(3), `spiky` ditch(10,2) or spike(10,2) and `missing`
/// violates no_long_miss(3). `random` is a bounded random walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pattern {
    Flat,
    Cold,
    Warm,
    Spiky,
    Missing,
    Random,
}

impl Pattern {
    pub const ALL: [Pattern; 6] = [
        Pattern::Flat,
        Pattern::Cold,
        Pattern::Warm,
        Pattern::Spiky,
        Pattern::Missing,
        Pattern::Random,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Pattern::Flat => "flat",
            Pattern::Cold => "cold",
            Pattern::Warm => "warm",
            Pattern::Spiky => "spiky",
            Pattern::Missing => "missing",
            Pattern::Random => "random",
        }
    }

    /// Illustrative metric means: warm starts draw many impressions but
    /// few clicks, flat starts the most clicks and purchases.
    pub fn default_means(self) -> MetricMeans {
        let (impressions, clicks, purchases) = match self {
            Pattern::Flat => (320.0, 30.0, 90.0),
            Pattern::Cold => (250.0, 10.0, 35.0),
            Pattern::Warm => (400.0, 5.0, 5.0),
            Pattern::Spiky => (300.0, 5.0, 20.0),
            Pattern::Missing => (280.0, 10.0, 25.0),
            Pattern::Random => (300.0, 12.0, 25.0),
        };
        MetricMeans {
            impressions,
            clicks,
            purchases,
        }
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Pattern {
    type Err = MixError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Pattern::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| MixError::UnknownPattern(s.to_owned()))
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MixError {
    #[error("unknown pattern `{0}` (expected flat, cold, warm, spiky, missing or random)")]
    UnknownPattern(String),
    #[error("`{0}` is not of the form pattern=proportion")]
    Syntax(String),
    #[error("pattern `{0}` listed twice")]
    Duplicate(Pattern),
    #[error("proportion of `{pattern}` must be a finite number >= 0, got `{value}`")]
    BadProportion { pattern: Pattern, value: String },
    #[error("proportions sum to {0}, expected 1")]
    BadSum(f64),
    #[error("n_records and category_count must be positive")]
    Empty,
    #[error("noise sigma must be finite and >= 0, got {0}")]
    BadSigma(f64),
    #[error("generated records need at least 6 days, got {0}")]
    TooFewDays(usize),
    #[error("metric means of `{0}` must be finite and >= 0")]
    BadMeans(Pattern),
}

/// Proportions of planted patterns, summing to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternMix(BTreeMap<Pattern, f64>);

impl PatternMix {
    pub fn new(proportions: impl IntoIterator<Item = (Pattern, f64)>) -> Result<Self, MixError> {
        let mut map = BTreeMap::new();
        for (pattern, p) in proportions {
            if !(p.is_finite() && p >= 0.0) {
                return Err(MixError::BadProportion {
                    pattern,
                    value: p.to_string(),
                });
            }
            if map.insert(pattern, p).is_some() {
                return Err(MixError::Duplicate(pattern));
            }
        }
        let sum: f64 = map.values().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(MixError::BadSum(sum));
        }
        Ok(Self(map))
    }

    pub fn proportion(&self, pattern: Pattern) -> f64 {
        self.0.get(&pattern).copied().unwrap_or(0.0)
    }

    /// Record counts per pattern summing exactly to `n` (largest remainder;
    /// ties go to the earlier pattern).
    pub fn counts(&self, n: usize) -> BTreeMap<Pattern, usize> {
        let mut counts = BTreeMap::new();
        let mut remainders = Vec::new();
        let mut assigned = 0;
        for (&pattern, &p) in &self.0 {
            let exact = p * n as f64;
            let base = (exact.floor() as usize).min(n);
            counts.insert(pattern, base);
            assigned += base;
            remainders.push((exact - base as f64, pattern));
        }
        remainders.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        for (_, pattern) in remainders
            .into_iter()
            .cycle()
            .take(n.saturating_sub(assigned))
        {
            *counts.get_mut(&pattern).expect("present") += 1;
        }
        counts
    }
}

/// Parses `cold=0.3,flat=0.7`.
pub fn parse_mix(text: &str) -> Result<PatternMix, MixError> {
    let mut entries = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        let (name, value) = part
            .split_once('=')
            .ok_or_else(|| MixError::Syntax(part.to_owned()))?;
        let pattern: Pattern = name.trim().parse()?;
        let value = value.trim();
        let p = value.parse::<f64>().map_err(|_| MixError::BadProportion {
            pattern,
            value: value.to_owned(),
        })?;
        entries.push((pattern, p));
    }
    PatternMix::new(entries)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricMeans {
    pub impressions: f64,
    pub clicks: f64,
    pub purchases: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorConfig {
    pub n_records: usize,
    pub category_count: usize,
    pub mix: PatternMix,
    /// Standard deviation of Gaussian noise added to present positions.
    pub noise_sigma: f64,
    pub seed: u64,
    pub days: usize,
    /// Per-pattern overrides of [`Pattern::default_means`].
    pub metric_means: BTreeMap<Pattern, MetricMeans>,
}

impl GeneratorConfig {
    pub fn new(n_records: usize, mix: PatternMix, seed: u64) -> Self {
        Self {
            n_records,
            category_count: 10,
            mix,
            noise_sigma: 0.0,
            seed,
            days: DEFAULT_DAYS,
            metric_means: BTreeMap::new(),
        }
    }

    pub fn means(&self, pattern: Pattern) -> MetricMeans {
        self.metric_means
            .get(&pattern)
            .copied()
            .unwrap_or_else(|| pattern.default_means())
    }

    fn validate(&self) -> Result<(), MixError> {
        if self.n_records == 0 || self.category_count == 0 {
            return Err(MixError::Empty);
        }
        if !(self.noise_sigma.is_finite() && self.noise_sigma >= 0.0) {
            return Err(MixError::BadSigma(self.noise_sigma));
        }
        if self.days < 6 {
            return Err(MixError::TooFewDays(self.days));
        }
        for pattern in Pattern::ALL {
            let m = self.means(pattern);
            if ![m.impressions, m.clicks, m.purchases]
                .iter()
                .all(|v| v.is_finite() && *v >= 0.0)
            {
                return Err(MixError::BadMeans(pattern));
            }
        }
        Ok(())
    }
}

/// A generated dataset with the pattern planted in each record.
#[derive(Debug, Clone, PartialEq)]
pub struct Synthetic {
    pub dataset: Dataset,
    pub labels: Vec<Pattern>,
}

impl Synthetic {
    /// Writes `product_id,planted_pattern`.
    pub fn write_labels<W: Write>(&self, writer: W) -> Result<(), IngestError> {
        let mut wtr = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(writer);
        let io = |e: csv::Error| IngestError::Io(e.into());
        wtr.write_record(["product_id", "planted_pattern"])
            .map_err(io)?;
        for (record, label) in self.dataset.records().iter().zip(&self.labels) {
            wtr.write_record([record.product_id.as_str(), label.name()])
                .map_err(io)?;
        }
        wtr.flush()?;
        Ok(())
    }
}

pub fn generate(config: &GeneratorConfig) -> Result<Synthetic, MixError> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut labels: Vec<Pattern> = config
        .mix
        .counts(config.n_records)
        .into_iter()
        .flat_map(|(pattern, count)| std::iter::repeat_n(pattern, count))
        .collect();
    labels.shuffle(&mut rng);

    let width = config.n_records.to_string().len();
    let noise = Normal::new(0.0, config.noise_sigma).expect("validated sigma");
    let mut builder = DatasetBuilder::new(config.days).expect("days >= 6");
    for (i, &pattern) in labels.iter().enumerate() {
        let mut positions = plant(pattern, config.days, &mut rng);
        if config.noise_sigma > 0.0 {
            for p in positions.iter_mut().filter(|p| **p != MISSING) {
                let noisy = *p + noise.sample(&mut rng);
                *p = ((noisy * 100.0).round() / 100.0).max(1.0);
            }
        }
        let means = config.means(pattern);
        let record = ProductRecord {
            product_id: format!("p{i:0width$}"),
            category: format!("c{}", rng.random_range(0..config.category_count)),
            positions,
            impressions: poisson(means.impressions, &mut rng),
            clicks: poisson(means.clicks, &mut rng),
            purchases: poisson(means.purchases, &mut rng),
        };
        builder
            .push(record, i + 1)
            .expect("generated records are valid");
    }
    Ok(Synthetic {
        dataset: builder.finish(),
        labels,
    })
}

fn poisson(mean: f64, rng: &mut ChaCha8Rng) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    Poisson::new(mean).expect("positive mean").sample(rng) as u64
}

fn plant(pattern: Pattern, days: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    match pattern {
        Pattern::Flat => vec![f64::from(rng.random_range(1..=150)); days],
        Pattern::Cold | Pattern::Warm => {
            // Strict daily moves over days 1..=4, flat afterwards.
            let sign = if pattern == Pattern::Cold { -1.0 } else { 1.0 };
            let start = if pattern == Pattern::Cold {
                rng.random_range(30..=150)
            } else {
                rng.random_range(1..=100)
            };
            let mut x = vec![f64::from(start); days];
            for day in 1..days {
                let step = if day <= 4 {
                    f64::from(rng.random_range(1..=5))
                } else {
                    0.0
                };
                x[day] = x[day - 1] + sign * step;
            }
            x
        }
        Pattern::Spiky => {
            // One-day excursion of 11..=18 positions at a uniform day. The
            // opening up-down wobble keeps the record out of the start
            // properties (flat, cold and warm).
            let level = f64::from(rng.random_range(20..=200));
            let mut x = vec![level; days];
            x[1] = level + 1.0;
            let day = rng.random_range(2..=days - 3);
            let amplitude = f64::from(rng.random_range(11..=18));
            let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            x[day + 1] += sign * amplitude;
            x
        }
        Pattern::Missing => {
            let mut x = vec![f64::from(rng.random_range(1..=150)); days];
            let len = rng.random_range(4..=6.min(days - 2));
            let start = rng.random_range(1..=days - 1 - len);
            x[start..start + len].fill(MISSING);
            x
        }
        Pattern::Random => {
            let mut x = vec![f64::from(rng.random_range(5..=150)); days];
            for day in 1..days {
                let step = f64::from(rng.random_range(-3..=3));
                x[day] = (x[day - 1] + step).max(1.0);
            }
            x
        }
    }
}
