//! Deterministic CSV and JSON emission.
//!
//! The CSV schema is frozen: a version line, the echoed config, the fixed
//! header `experiment,group,n,trial,statistic,lower,upper,exact,seed`, one
//! row per measurement in `(n, trial, statistic)` order, then summary and
//! fit comment lines. Integers print bare; non-integer values print with
//! six fixed decimals. Identical configs produce identical bytes.

use crate::config::ExperimentConfig;
use serde::Serialize;
use std::io::Write;

pub const FORMAT_VERSION: &str = "rhlab-output-v1";

/// One measurement row.
#[derive(Debug, Clone, Serialize)]
pub struct ResultRow {
    pub experiment: String,
    pub group: String,
    pub n: usize,
    pub trial: usize,
    pub statistic: String,
    pub lower: Value,
    pub upper: Value,
    pub exact: bool,
    pub seed: u64,
}

/// Either an exact integer or a fixed-precision decimal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Value {
    Int(u64),
    Real(f64),
}

impl Value {
    pub fn render(self) -> String {
        match self {
            Value::Int(v) => v.to_string(),
            Value::Real(v) => format!("{v:.6}"),
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Value::Int(v) => v as f64,
            Value::Real(v) => v,
        }
    }
}

impl Serialize for Value {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Value::Int(v) => s.serialize_u64(*v),
            // serialize through the fixed-precision rendering so JSON and
            // CSV agree byte-for-byte on the numbers
            Value::Real(v) => s.serialize_f64(format!("{v:.6}").parse().unwrap()),
        }
    }
}

/// Per-`n` summary of one statistic.
#[derive(Debug, Clone, Serialize)]
pub struct SummaryLine {
    pub statistic: String,
    pub n: usize,
    pub mean: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

/// One entry of a model comparison.
#[derive(Debug, Clone, Serialize)]
pub struct FitLine {
    pub statistic: String,
    pub shape: String,
    pub coefficient: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exponent: Option<f64>,
    pub r_squared: f64,
    pub rank: usize,
}

/// One entry of a tail fit.
#[derive(Debug, Clone, Serialize)]
pub struct TailLine {
    pub statistic: String,
    pub n: usize,
    pub kind: String,
    pub rate_or_exponent: f64,
    pub r_squared: f64,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct OutputDoc {
    pub rows: Vec<ResultRow>,
    pub summaries: Vec<SummaryLine>,
    pub fits: Vec<FitLine>,
    pub tails: Vec<TailLine>,
    /// Free-form report lines (decompose output and global notes).
    pub notes: Vec<String>,
}

pub fn write_csv(
    w: &mut impl Write,
    config: &ExperimentConfig,
    doc: &OutputDoc,
) -> std::io::Result<()> {
    writeln!(w, "# {FORMAT_VERSION}")?;
    writeln!(w, "# config: {}", config.echo())?;
    writeln!(
        w,
        "experiment,group,n,trial,statistic,lower,upper,exact,seed"
    )?;
    for r in &doc.rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{}",
            r.experiment,
            r.group,
            r.n,
            r.trial,
            r.statistic,
            r.lower.render(),
            r.upper.render(),
            r.exact,
            r.seed
        )?;
    }
    for s in &doc.summaries {
        writeln!(
            w,
            "# summary: statistic={} n={} mean={:.6} ci_low={:.6} ci_high={:.6}",
            s.statistic, s.n, s.mean, s.ci_low, s.ci_high
        )?;
    }
    for f in &doc.fits {
        let exponent = f
            .exponent
            .map(|e| format!(" exponent={e:.6}"))
            .unwrap_or_default();
        writeln!(
            w,
            "# fit: statistic={} shape={} coefficient={:.6}{} r_squared={:.6} rank={}",
            f.statistic, f.shape, f.coefficient, exponent, f.r_squared, f.rank
        )?;
    }
    for t in &doc.tails {
        writeln!(
            w,
            "# tail: statistic={} n={} kind={} rate_or_exponent={:.6} r_squared={:.6}",
            t.statistic, t.n, t.kind, t.rate_or_exponent, t.r_squared
        )?;
    }
    for note in &doc.notes {
        writeln!(w, "# note: {note}")?;
    }
    Ok(())
}

#[derive(Serialize)]
struct JsonDoc<'a> {
    format: &'static str,
    config: String,
    rows: &'a [ResultRow],
    summaries: &'a [SummaryLine],
    fits: &'a [FitLine],
    tails: &'a [TailLine],
    notes: &'a [String],
}

pub fn write_json(
    w: &mut impl Write,
    config: &ExperimentConfig,
    doc: &OutputDoc,
) -> std::io::Result<()> {
    let json = JsonDoc {
        format: FORMAT_VERSION,
        config: config.echo(),
        rows: &doc.rows,
        summaries: &doc.summaries,
        fits: &doc.fits,
        tails: &doc.tails,
        notes: &doc.notes,
    };
    serde_json::to_writer_pretty(&mut *w, &json)?;
    writeln!(w)?;
    Ok(())
}

/// Parse the rows back out of a CSV file (used by the `fit` subcommand).
pub fn read_csv_rows(text: &str) -> Vec<ResultRow> {
    let mut rows = Vec::new();
    for line in text.lines() {
        if line.starts_with('#') || line.starts_with("experiment,") || line.trim().is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != 9 {
            continue;
        }
        let parse_value = |s: &str| {
            if s.contains('.') {
                Value::Real(s.parse().unwrap_or(f64::NAN))
            } else {
                Value::Int(s.parse().unwrap_or(0))
            }
        };
        rows.push(ResultRow {
            experiment: parts[0].into(),
            group: parts[1].into(),
            n: parts[2].parse().unwrap_or(0),
            trial: parts[3].parse().unwrap_or(0),
            statistic: parts[4].into(),
            lower: parse_value(parts[5]),
            upper: parse_value(parts[6]),
            exact: parts[7] == "true",
            seed: parts[8].parse().unwrap_or(0),
        });
    }
    rows
}
