//! Product datasets: records, file formats, the derivative channel and a
//! seeded generator of synthetic ranking signals.
//!
//! CSV files carry the header
//! `product_id,category,pos_0,...,pos_{N-1},impressions,clicks,purchases`
//! (N = 14 unless overridden). JSONL files hold one object per line with the
//! same fields, positions as an array. A position is a daily average rank
//! (`>= 1`) or `-1` for a day without data.

mod derivative;
mod generate;
mod io;
mod record;

pub use derivative::{derivative, to_traceset, Derivative};
pub use generate::{
    generate, parse_mix, GeneratorConfig, MetricMeans, MixError, Pattern, PatternMix, Synthetic,
};
pub use io::{labels_path, load, read_csv, read_jsonl, write, write_csv, write_jsonl, Format};
pub use record::{Dataset, IngestError, ProductRecord, DEFAULT_DAYS};

#[cfg(test)]
mod tests;
