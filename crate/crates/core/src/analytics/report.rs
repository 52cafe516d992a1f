//! CSV, plain-text and gnuplot renderings of analysis results.

use std::fmt::Write;

use super::{ExpansionReport, ExpansionTarget, KMeansResult, MetricTable, RateTable};

/// Marker for an undefined mean.
pub const UNDEFINED: &str = "NA";

fn to_csv<I, R>(header: &[&str], rows: I) -> String
where
    I: IntoIterator<Item = R>,
    R: IntoIterator,
    R::Item: AsRef<[u8]>,
{
    let mut wtr = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let ok = "writing to memory";
    wtr.write_record(header).expect(ok);
    for row in rows {
        wtr.write_record(row).expect(ok);
    }
    String::from_utf8(wtr.into_inner().expect(ok)).expect("utf-8 input")
}

/// Left-aligned text columns, numbers right-aligned.
fn aligned(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let rules: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    let numeric = |s: &str| s.parse::<f64>().is_ok() || s == UNDEFINED;
    let mut out = String::new();
    let mut line = |cells: Vec<&str>| {
        let mut text = String::new();
        for (i, (cell, w)) in cells.iter().zip(&widths).enumerate() {
            if i > 0 {
                text.push_str("  ");
            }
            if numeric(cell) {
                let _ = write!(text, "{cell:>w$}");
            } else {
                let _ = write!(text, "{cell:<w$}");
            }
        }
        out.push_str(text.trim_end());
        out.push('\n');
    };
    line(header.to_vec());
    line(rules.iter().map(String::as_str).collect());
    for row in rows {
        line(row.iter().map(String::as_str).collect());
    }
    out
}

impl RateTable {
    /// `category,property,satisfied,total,rate`
    pub fn to_csv(&self) -> String {
        to_csv(
            &["category", "property", "satisfied", "total", "rate"],
            self.rows.iter().map(|r| {
                [
                    r.category.clone(),
                    r.property.clone(),
                    r.satisfied.to_string(),
                    r.total.to_string(),
                    r.rate.to_string(),
                ]
            }),
        )
    }

    pub fn to_text(&self) -> String {
        let rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| {
                vec![
                    r.category.clone(),
                    r.property.clone(),
                    r.satisfied.to_string(),
                    r.total.to_string(),
                    format!("{:.4}", r.rate),
                ]
            })
            .collect();
        aligned(
            &["category", "property", "satisfied", "total", "rate"],
            &rows,
        )
    }

    /// One line per category, one column per property, rates in percent.
    pub fn to_gnuplot(&self) -> String {
        let mut properties: Vec<&str> = Vec::new();
        for r in &self.rows {
            if !properties.contains(&r.property.as_str()) {
                properties.push(&r.property);
            }
        }
        let mut out = format!("# category {}\n", properties.join(" "));
        let mut category: Option<&str> = None;
        for r in &self.rows {
            if category != Some(r.category.as_str()) {
                if category.is_some() {
                    out.push('\n');
                }
                out.push_str(&r.category);
                category = Some(&r.category);
            }
            let _ = write!(out, " {}", 100.0 * r.satisfied as f64 / r.total as f64);
        }
        out.push('\n');
        out
    }
}

impl MetricTable {
    /// `property,metric,mean,count`; an undefined mean is written as `NA`.
    pub fn to_csv(&self) -> String {
        to_csv(
            &["property", "metric", "mean", "count"],
            self.rows.iter().map(|r| {
                [
                    r.property.clone(),
                    r.metric.name().to_owned(),
                    r.mean
                        .map_or_else(|| UNDEFINED.to_owned(), |m| m.to_string()),
                    r.count.to_string(),
                ]
            }),
        )
    }

    pub fn to_text(&self) -> String {
        let rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| {
                vec![
                    r.property.clone(),
                    r.metric.name().to_owned(),
                    r.mean
                        .map_or_else(|| UNDEFINED.to_owned(), |m| format!("{m:.2}")),
                    r.count.to_string(),
                ]
            })
            .collect();
        aligned(&["property", "metric", "mean", "count"], &rows)
    }

    /// One line per property with the three means (`NA` if undefined).
    pub fn to_gnuplot(&self) -> String {
        let mut out = String::from("# property impressions clicks purchases\n");
        for chunk in self.rows.chunks(3) {
            out.push_str(&chunk[0].property);
            for r in chunk {
                match r.mean {
                    Some(m) => {
                        let _ = write!(out, " {m}");
                    }
                    None => {
                        let _ = write!(out, " {UNDEFINED}");
                    }
                }
            }
            out.push('\n');
        }
        out
    }
}

impl KMeansResult {
    /// `cluster,pos_0..pos_{T-1}`
    pub fn centroids_csv(&self) -> String {
        let dim = self.centroids.first().map_or(0, Vec::len);
        let mut header = vec!["cluster".to_owned()];
        header.extend((0..dim).map(|i| format!("pos_{i}")));
        let header: Vec<&str> = header.iter().map(String::as_str).collect();
        to_csv(
            &header,
            self.centroids.iter().enumerate().map(|(c, centroid)| {
                std::iter::once(c.to_string())
                    .chain(centroid.iter().map(f64::to_string))
                    .collect::<Vec<_>>()
            }),
        )
    }

    /// `product_id,cluster`; excluded records get an empty cluster.
    pub fn assignments_csv<'a>(&self, ids: impl IntoIterator<Item = &'a str>) -> String {
        to_csv(
            &["product_id", "cluster"],
            ids.into_iter()
                .zip(&self.assignments)
                .map(|(id, c)| [id.to_owned(), c.map_or_else(String::new, |c| c.to_string())]),
        )
    }

    /// One line per day, one column per centroid.
    pub fn to_gnuplot(&self) -> String {
        let dim = self.centroids.first().map_or(0, Vec::len);
        let names: Vec<String> = (0..self.k).map(|c| format!("c{c}")).collect();
        let mut out = format!("# day {}\n", names.join(" "));
        for day in 0..dim {
            out.push_str(&day.to_string());
            for centroid in &self.centroids {
                let _ = write!(out, " {}", centroid[day]);
            }
            out.push('\n');
        }
        out
    }
}

impl ExpansionReport {
    pub fn to_text(&self) -> String {
        let (target, rule) = match self.target {
            ExpansionTarget::Propositional => (
                "propositional",
                "connectives counted, atoms free, bounded windows padded, top-level junction excluded",
            ),
            ExpansionTarget::DataframeQuery => ("dataframe query", "&, |, ~ and comparisons counted"),
        };
        format!(
            "# target: {target}\n# horizon: {} days\n# counting rule: {rule}\n# operators: {} (total {})\n# temporal formula operators: {}\n{}\n",
            self.horizon, self.operator_count, self.total_count, self.stl_operator_count, self.text
        )
    }
}

/// `product_id,satisfied` lines.
pub fn verdicts_csv<'a>(ids: impl IntoIterator<Item = &'a str>, verdicts: &[bool]) -> String {
    to_csv(
        &["product_id", "satisfied"],
        ids.into_iter()
            .zip(verdicts)
            .map(|(id, v)| [id.to_owned(), v.to_string()]),
    )
}
