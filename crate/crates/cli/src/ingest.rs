use std::path::Path;

use chrono::NaiveDate;
use serde::Deserialize;
use trendwave_core::decompose::TimeSeries;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq)]
pub struct Ingested {
    /// Weekly closes, week 1 at the first row.
    pub series: TimeSeries,
    pub first_date: NaiveDate,
    /// Weeks missing from the file and filled with the previous close.
    pub filled: usize,
}

#[derive(Deserialize)]
struct Row {
    date: String,
    close: String,
}

/// Read a `date,close` file of weekly observations.
pub fn ingest_csv(path: impl AsRef<Path>) -> CliResult<Ingested> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_csv(&text, path)
}

pub fn parse_csv(text: &str, path: &Path) -> CliResult<Ingested> {
    let parse_err = |line: u64, message: String| CliError::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| parse_err(1, e.to_string()))?
        .clone();
    if headers.len() != 2 || &headers[0] != "date" || &headers[1] != "close" {
        return Err(parse_err(1, format!("expected header `date,close`, found `{}`", headers.iter().collect::<Vec<_>>().join(","))));
    }

    let mut values: Vec<f64> = Vec::new();
    let mut first_date = None;
    let mut last: Option<NaiveDate> = None;
    let mut filled = 0;
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_err(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let row: Row = record
            .deserialize(Some(&headers))
            .map_err(|e| parse_err(line, e.to_string()))?;
        let date = NaiveDate::parse_from_str(&row.date, "%Y-%m-%d")
            .map_err(|e| parse_err(line, format!("bad date `{}`: {e}", row.date)))?;
        let close: f64 = row
            .close
            .parse()
            .ok()
            .filter(|v: &f64| v.is_finite())
            .ok_or_else(|| parse_err(line, format!("bad close value `{}`", row.close)))?;
        if let Some(prev) = last {
            let days = (date - prev).num_days();
            if days <= 0 {
                return Err(parse_err(
                    line,
                    format!("date {date} does not follow {prev}"),
                ));
            }
            let weeks = ((days as f64) / 7.0).round().max(1.0) as usize;
            let carry = *values.last().expect("previous row");
            for _ in 1..weeks {
                values.push(carry);
                filled += 1;
            }
        } else {
            first_date = Some(date);
        }
        values.push(close);
        last = Some(date);
    }
    let first_date = first_date.ok_or_else(|| parse_err(2, "no data rows".into()))?;
    let label = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    Ok(Ingested {
        series: TimeSeries::differential(values).with_label(label),
        first_date,
        filled,
    })
}
