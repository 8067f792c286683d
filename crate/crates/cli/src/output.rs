use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};
use clap::ValueEnum;
use nqs_core::SpinConfig;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

pub fn open(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn flatten(prefix: &str, value: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                flatten(&key(k), v, out);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&key(&i.to_string()), v, out);
            }
        }
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Writes a report object. CSV and text flatten nested fields into dotted keys.
pub fn write_report(w: &mut dyn Write, format: Format, report: &Map<String, Value>) -> Result<()> {
    let value = Value::Object(report.clone());
    match format {
        Format::Json => writeln!(w, "{}", serde_json::to_string_pretty(&value)?)?,
        Format::Csv | Format::Text => {
            let mut rows = Vec::new();
            flatten("", &value, &mut rows);
            if format == Format::Csv {
                writeln!(w, "field,value")?;
            }
            for (k, v) in rows {
                match format {
                    Format::Csv => writeln!(w, "{},{}", csv_field(&k), csv_field(&v))?,
                    _ => writeln!(w, "{k}: {v}")?,
                }
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// Writes samples as one `±` string per line (text), `step,config` rows (CSV) or inside the
/// report under `samples` (JSON).
pub fn write_samples(
    w: &mut dyn Write,
    format: Format,
    samples: &[SpinConfig],
    mut report: Map<String, Value>,
) -> Result<()> {
    match format {
        Format::Text => {
            for s in samples {
                writeln!(w, "{s}")?;
            }
        }
        Format::Csv => {
            writeln!(w, "step,config")?;
            for (i, s) in samples.iter().enumerate() {
                writeln!(w, "{i},{s}")?;
            }
        }
        Format::Json => {
            report.insert(
                "samples".into(),
                samples.iter().map(|s| Value::String(s.to_string())).collect(),
            );
            writeln!(w, "{}", serde_json::to_string_pretty(&Value::Object(report))?)?;
        }
    }
    w.flush()?;
    Ok(())
}
