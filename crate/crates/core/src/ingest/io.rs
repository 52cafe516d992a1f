use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::record::DatasetBuilder;
use super::{Dataset, IngestError, ProductRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Jsonl,
}

impl Format {
    /// `.jsonl` / `.ndjson` files are JSONL, everything else CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("jsonl" | "ndjson") => Format::Jsonl,
            _ => Format::Csv,
        }
    }
}

fn header(days: usize) -> Vec<String> {
    let mut columns = vec!["product_id".to_owned(), "category".to_owned()];
    columns.extend((0..days).map(|i| format!("pos_{i}")));
    columns.extend(["impressions", "clicks", "purchases"].map(str::to_owned));
    columns
}

fn csv_error(err: csv::Error) -> IngestError {
    let line = err.position().map_or(0, |p| p.line() as usize);
    if err.is_io_error() {
        if let csv::ErrorKind::Io(io) = err.into_kind() {
            return IngestError::Io(io);
        }
        unreachable!("is_io_error checked the kind");
    }
    IngestError::Schema {
        line,
        message: err.to_string(),
    }
}

/// Reads a CSV dataset whose records have `days` positions.
pub fn read_csv<R: Read>(reader: R, days: usize) -> Result<Dataset, IngestError> {
    let mut builder = DatasetBuilder::new(days)?;
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(reader);
    let expected = header(days);
    let found = rdr.headers().map_err(csv_error)?.clone();
    if found.is_empty() {
        return Err(IngestError::Schema {
            line: 1,
            message: "missing header".into(),
        });
    }
    for (i, name) in expected.iter().enumerate() {
        match found.get(i) {
            Some(f) if f == name => {}
            Some(f) => {
                return Err(IngestError::Schema {
                    line: 1,
                    message: format!("header column {} should be `{name}`, found `{f}`", i + 1),
                })
            }
            None => {
                return Err(IngestError::Schema {
                    line: 1,
                    message: format!("header is missing column `{name}`"),
                })
            }
        }
    }
    if found.len() > expected.len() {
        return Err(IngestError::Schema {
            line: 1,
            message: format!(
                "header has {} columns, expected {}",
                found.len(),
                expected.len()
            ),
        });
    }

    for row in rdr.records() {
        let row = row.map_err(csv_error)?;
        let line = row.position().map_or(0, |p| p.line() as usize);
        if row.len() != expected.len() {
            return Err(IngestError::Schema {
                line,
                message: format!("expected {} columns, found {}", expected.len(), row.len()),
            });
        }
        let invalid = |column: &str, message: String| IngestError::Invalid {
            line,
            column: column.to_owned(),
            message,
        };
        let number = |i: usize| -> Result<f64, IngestError> {
            row[i]
                .trim()
                .parse::<f64>()
                .map_err(|_| invalid(&expected[i], format!("`{}` is not a number", &row[i])))
        };
        let count = |i: usize| -> Result<u64, IngestError> {
            row[i].trim().parse::<u64>().map_err(|_| {
                invalid(
                    &expected[i],
                    format!("`{}` is not a non-negative integer", &row[i]),
                )
            })
        };
        let positions = (2..2 + days).map(number).collect::<Result<Vec<_>, _>>()?;
        let record = ProductRecord {
            product_id: row[0].to_owned(),
            category: row[1].to_owned(),
            positions,
            impressions: count(2 + days)?,
            clicks: count(3 + days)?,
            purchases: count(4 + days)?,
        };
        builder.push(record, line)?;
    }
    Ok(builder.finish())
}

pub fn write_csv<W: Write>(writer: W, dataset: &Dataset) -> Result<(), IngestError> {
    let mut wtr = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(writer);
    wtr.write_record(header(dataset.days()))
        .map_err(csv_error)?;
    let mut row = Vec::with_capacity(dataset.days() + 5);
    for record in dataset.records() {
        row.clear();
        row.push(record.product_id.clone());
        row.push(record.category.clone());
        row.extend(record.positions.iter().map(|p| p.to_string()));
        row.push(record.impressions.to_string());
        row.push(record.clicks.to_string());
        row.push(record.purchases.to_string());
        wtr.write_record(&row).map_err(csv_error)?;
    }
    wtr.flush()?;
    Ok(())
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonRecord {
    product_id: String,
    category: String,
    positions: Vec<f64>,
    impressions: u64,
    clicks: u64,
    purchases: u64,
}

/// Reads one JSON object per line; blank lines are skipped.
pub fn read_jsonl<R: BufRead>(reader: R, days: usize) -> Result<Dataset, IngestError> {
    let mut builder = DatasetBuilder::new(days)?;
    for (i, bytes) in reader.split(b'\n').enumerate() {
        let bytes = bytes?;
        let line = i + 1;
        if bytes.iter().all(u8::is_ascii_whitespace) {
            continue;
        }
        let json: JsonRecord =
            serde_json::from_slice(&bytes).map_err(|err| IngestError::Schema {
                line,
                message: err.to_string(),
            })?;
        let record = ProductRecord {
            product_id: json.product_id,
            category: json.category,
            positions: json.positions,
            impressions: json.impressions,
            clicks: json.clicks,
            purchases: json.purchases,
        };
        builder.push(record, line)?;
    }
    Ok(builder.finish())
}

pub fn write_jsonl<W: Write>(mut writer: W, dataset: &Dataset) -> Result<(), IngestError> {
    for record in dataset.records() {
        let json = JsonRecord {
            product_id: record.product_id.clone(),
            category: record.category.clone(),
            positions: record.positions.clone(),
            impressions: record.impressions,
            clicks: record.clicks,
            purchases: record.purchases,
        };
        serde_json::to_writer(&mut writer, &json).map_err(std::io::Error::from)?;
        writer.write_all(b"\n")?;
    }
    writer.flush()?;
    Ok(())
}

/// Loads `path`, choosing the format from its extension.
pub fn load(path: &Path, days: usize) -> Result<Dataset, IngestError> {
    let file = BufReader::new(File::open(path)?);
    match Format::from_path(path) {
        Format::Csv => read_csv(file, days),
        Format::Jsonl => read_jsonl(file, days),
    }
}

pub fn write(path: &Path, dataset: &Dataset) -> Result<(), IngestError> {
    let file = BufWriter::new(File::create(path)?);
    match Format::from_path(path) {
        Format::Csv => write_csv(file, dataset),
        Format::Jsonl => write_jsonl(file, dataset),
    }
}

/// `dir/name.labels.csv` for a dataset at `dir/name.ext`.
pub fn labels_path(dataset_path: &Path) -> PathBuf {
    let stem = dataset_path
        .file_stem()
        .map_or_else(|| "dataset".into(), |s| s.to_string_lossy().into_owned());
    dataset_path.with_file_name(format!("{stem}.labels.csv"))
}
