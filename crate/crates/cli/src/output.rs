use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::config::{Format, SweepConfig};
use crate::error::{CliError, Result};
use crate::rows::{Label, Row};

pub const CSV_HEADER: [&str; 6] = [
    "gamma",
    "label",
    "tc_over_g",
    "lambda_max",
    "residual",
    "iterations",
];

/// Everything a sweep produced, as written to JSON.
#[derive(Debug, Clone, Serialize)]
pub struct RunRecord {
    pub config: SweepConfig,
    pub rows: Vec<Row>,
    /// Seconds since the Unix epoch; `SOURCE_DATE_EPOCH` overrides the clock.
    pub timestamp: u64,
    pub tool_version: String,
}

impl RunRecord {
    pub fn new(config: SweepConfig, rows: Vec<Row>) -> Self {
        Self {
            config,
            rows,
            timestamp: timestamp(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

fn timestamp() -> u64 {
    std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or_else(|| {
            SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs())
        })
}

/// `x` with `digits` decimals, cut rather than rounded.
pub fn truncate_digits(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let s = format!("{:.*}", digits + 8, x);
    let cut = s.len() - 8;
    let out = &s[..cut];
    if x < 0.0 && out.trim_start_matches(['-', '0', '.']).is_empty() {
        out[1..].to_string()
    } else {
        out.to_string()
    }
}

/// Fails if any lower-bound row exceeds the upper-bound row of the same `γ`.
pub fn check_sandwich(rows: &[Row]) -> Result<()> {
    let mut upper: BTreeMap<u64, f64> = BTreeMap::new();
    for r in rows.iter().filter(|r| r.label == Label::Upper) {
        upper.insert(r.gamma.to_bits(), r.tc_over_g);
    }
    for r in rows.iter().filter(|r| r.label != Label::Upper) {
        if let Some(&u) = upper.get(&r.gamma.to_bits()) {
            if r.tc_over_g.is_nan() || r.tc_over_g > u {
                return Err(CliError::Sandwich {
                    gamma: r.gamma,
                    label: r.label.to_string(),
                    lower: r.tc_over_g,
                    upper: u,
                });
            }
        }
    }
    Ok(())
}

/// Shortest round-trip decimal; scientific notation outside `[1e-5, 1e16)`.
pub fn format_float(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-5..1e16).contains(&a) {
        x.to_string()
    } else {
        format!("{x:e}")
    }
}

pub fn write_csv<W: Write>(rows: &[Row], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            format_float(r.gamma),
            r.label.to_string(),
            format_float(r.tc_over_g),
            format_float(r.lambda_max),
            format_float(r.residual),
            r.iterations.to_string(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn write_json<W: Write>(record: &RunRecord, mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, record)?;
    out.write_all(b"\n").map_err(|e| io_error(None, e))?;
    Ok(())
}

/// Checks the sandwich, then writes the record to its file, or to `fallback` if it has none.
pub fn write_record(record: &RunRecord, fallback: &mut impl Write) -> Result<()> {
    check_sandwich(&record.rows)?;
    let target = &record.config.output;
    match &target.path {
        Some(path) => {
            let file = File::create(path).map_err(|e| io_error(Some(path), e))?;
            let mut w = BufWriter::new(file);
            write_format(record, target.format, &mut w)?;
            w.flush().map_err(|e| io_error(Some(path), e))
        }
        None => write_format(record, target.format, fallback),
    }
}

fn write_format<W: Write>(record: &RunRecord, format: Format, out: W) -> Result<()> {
    match format {
        Format::Csv => write_csv(&record.rows, out),
        Format::Json => write_json(record, out),
    }
}

fn io_error(path: Option<&Path>, source: io::Error) -> CliError {
    CliError::Io {
        path: path.map_or_else(|| "<stdout>".into(), Path::to_path_buf),
        source,
    }
}
