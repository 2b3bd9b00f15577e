//! JSON and CSV renderers. JSON objects always come out with sorted keys.

use std::collections::BTreeMap;
use std::io::{self, Write};

use cranklab_core::qseries::{BivariateSeries, TruncatedSeries};
use cranklab_core::{class_counts, StatTable};
use serde::Serialize;
use serde_json::{json, Value};

pub const FORMAT_VERSION: u32 = 1;

/// Pretty JSON with sorted keys and a trailing newline.
pub fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> io::Result<()> {
    // Going through `Value` sorts object keys (serde_json's map is a BTreeMap).
    let value = serde_json::to_value(value).map_err(io::Error::other)?;
    serde_json::to_writer_pretty(&mut *out, &value).map_err(io::Error::other)?;
    out.write_all(b"\n")
}

/// Envelope for `verify` and `scan` output.
#[derive(Debug, Clone, Serialize)]
pub struct ReportDocument {
    pub command: String,
    pub format_version: u32,
    pub parameters: BTreeMap<String, Value>,
    pub result: Value,
    pub timing_ms: f64,
}

impl ReportDocument {
    pub fn new(
        command: impl Into<String>,
        parameters: BTreeMap<String, Value>,
        result: Value,
    ) -> Self {
        ReportDocument {
            command: command.into(),
            format_version: FORMAT_VERSION,
            parameters,
            result,
            timing_ms: 0.0,
        }
    }
}

fn csv_writer(out: &mut dyn Write) -> csv::Writer<&mut dyn Write> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}

/// `n,m,count` for every nonzero entry; negative `m` keep their sign.
pub fn table_csv(out: &mut dyn Write, table: &StatTable) -> io::Result<()> {
    let mut w = csv_writer(out);
    w.write_record(["n", "m", "count"])?;
    for n in 1..=table.max_n() {
        for (m, c) in table.row(n) {
            w.write_record([n.to_string(), m.to_string(), c.to_string()])?;
        }
    }
    w.flush()
}

/// `n,residue,count` for every residue class mod `q`, `n >= 1`.
pub fn classes_csv(out: &mut dyn Write, table: &StatTable, q: u64) -> io::Result<()> {
    let mut w = csv_writer(out);
    w.write_record(["n", "residue", "count"])?;
    for n in 1..=table.max_n() {
        let cv = class_counts(table, n, q).map_err(io::Error::other)?;
        for (r, c) in cv.counts.iter().enumerate() {
            w.write_record([n.to_string(), r.to_string(), c.to_string()])?;
        }
    }
    w.flush()
}

pub fn table_json(table: &StatTable) -> Value {
    let rows: Vec<Value> = (1..=table.max_n())
        .map(|n| {
            let entries: Vec<Value> = table
                .row(n)
                .map(|(m, c)| json!([m, c.to_string()]))
                .collect();
            json!({ "n": n, "counts": entries })
        })
        .collect();
    json!({
        "format_version": FORMAT_VERSION,
        "kind": table.kind().name(),
        "max_n": table.max_n(),
        "rows": rows,
    })
}

pub fn classes_json(table: &StatTable, q: u64) -> io::Result<Value> {
    let rows = (1..=table.max_n())
        .map(|n| {
            let cv = class_counts(table, n, q).map_err(io::Error::other)?;
            let counts: Vec<String> = cv.counts.iter().map(ToString::to_string).collect();
            Ok(json!({ "n": n, "counts": counts }))
        })
        .collect::<io::Result<Vec<Value>>>()?;
    Ok(json!({
        "format_version": FORMAT_VERSION,
        "kind": table.kind().name(),
        "max_n": table.max_n(),
        "q": q,
        "rows": rows,
    }))
}

pub fn series_json(series: &TruncatedSeries, name: &str, modulus: Option<u64>) -> Value {
    let coeffs: Vec<String> = series.coeffs().iter().map(ToString::to_string).collect();
    json!({
        "format_version": FORMAT_VERSION,
        "series": name,
        "precision": series.precision(),
        "modulus": modulus,
        "coeffs": coeffs,
    })
}

pub fn bivariate_json(series: &BivariateSeries, name: &str, modulus: Option<u64>) -> Value {
    let rows: Vec<Value> = (0..=series.precision())
        .map(|n| {
            let entries: Vec<Value> = series
                .row(n)
                .map(|(m, c)| json!([m, c.to_string()]))
                .collect();
            json!({ "n": n, "coeffs": entries })
        })
        .collect();
    json!({
        "format_version": FORMAT_VERSION,
        "series": name,
        "precision": series.precision(),
        "modulus": modulus,
        "rows": rows,
    })
}

pub fn series_csv(out: &mut dyn Write, series: &TruncatedSeries) -> io::Result<()> {
    let mut w = csv_writer(out);
    w.write_record(["n", "coeff"])?;
    for (n, c) in series.coeffs().iter().enumerate() {
        w.write_record([n.to_string(), c.to_string()])?;
    }
    w.flush()
}

pub fn bivariate_csv(out: &mut dyn Write, series: &BivariateSeries) -> io::Result<()> {
    let mut w = csv_writer(out);
    w.write_record(["n", "m", "coeff"])?;
    for n in 0..=series.precision() {
        for (m, c) in series.row(n) {
            w.write_record([n.to_string(), m.to_string(), c.to_string()])?;
        }
    }
    w.flush()
}
