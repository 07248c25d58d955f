//! Reading configurations and writing reports.
//!
//! JSON input is `{"m": 2, "points": [[0, 0], [1, "1/2"]]}`; coordinates may
//! be numbers or strings. CSV input has one point per row and an optional
//! header line.

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::geometry::PointConfig;
use crate::scalar::{Mode, Rational, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InputFormat {
    Json,
    Csv,
}

impl InputFormat {
    /// `.csv` selects CSV; anything else is read as JSON.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => InputFormat::Csv,
            _ => InputFormat::Json,
        }
    }
}

/// A configuration in whichever mode it was loaded.
#[derive(Clone, Debug, PartialEq)]
pub enum LoadedConfig {
    Exact(PointConfig<Rational>),
    Float(PointConfig<f64>),
}

impl LoadedConfig {
    pub fn mode(&self) -> Mode {
        match self {
            LoadedConfig::Exact(_) => Mode::Exact,
            LoadedConfig::Float(_) => Mode::Float,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            LoadedConfig::Exact(p) => p.len(),
            LoadedConfig::Float(p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dim(&self) -> usize {
        match self {
            LoadedConfig::Exact(p) => p.dim(),
            LoadedConfig::Float(p) => p.dim(),
        }
    }

    pub fn to_float(&self) -> PointConfig<f64> {
        match self {
            LoadedConfig::Exact(p) => p.to_float(),
            LoadedConfig::Float(p) => p.clone(),
        }
    }
}

/// Coordinates as text, before a mode is chosen.
#[derive(Clone, Debug, PartialEq)]
pub struct RawConfig {
    pub m: usize,
    pub rows: Vec<Vec<String>>,
}

impl RawConfig {
    /// Parses every coordinate in the given mode.
    pub fn parse<T: Scalar>(&self) -> Result<PointConfig<T>> {
        let points = self
            .rows
            .iter()
            .map(|row| row.iter().map(|s| T::parse_coordinate(s)).collect::<Result<Vec<T>>>())
            .collect::<Result<Vec<_>>>()?;
        PointConfig::new(self.m, points)
    }

    /// Exact when every coordinate is a rational literal, unless `mode`
    /// forces a choice.
    pub fn resolve(&self, mode: Option<Mode>) -> Result<LoadedConfig> {
        match mode {
            Some(Mode::Exact) => self.parse().map(LoadedConfig::Exact),
            Some(Mode::Float) => self.parse().map(LoadedConfig::Float),
            None => match self.parse() {
                Ok(p) => Ok(LoadedConfig::Exact(p)),
                Err(_) => self.parse().map(LoadedConfig::Float),
            },
        }
    }
}

fn coordinate_text(v: &Value) -> Result<String> {
    match v {
        // arbitrary precision keeps the literal as written
        Value::Number(n) => Ok(n.to_string()),
        Value::String(s) => Ok(s.trim().to_string()),
        other => Err(Error::Parse(format!("coordinate must be a number or string, got {other}"))),
    }
}

pub fn parse_json(text: &str) -> Result<RawConfig> {
    let doc: Value = serde_json::from_str(text)?;
    let points =
        doc.get("points").and_then(Value::as_array).ok_or_else(|| Error::Parse("missing \"points\" array".into()))?;
    let rows = points
        .iter()
        .map(|p| {
            p.as_array()
                .ok_or_else(|| Error::Parse("each point must be an array".into()))?
                .iter()
                .map(coordinate_text)
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let m = match doc.get("m") {
        Some(v) => {
            v.as_u64().filter(|&m| m > 0).ok_or_else(|| Error::Parse("\"m\" must be a positive integer".into()))?
                as usize
        }
        None => rows.first().map(Vec::len).ok_or_else(|| Error::Parse("no points and no \"m\"".into()))?,
    };
    Ok(RawConfig { m, rows })
}

pub fn parse_csv(text: &str) -> Result<RawConfig> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (k, record) in reader.records().enumerate() {
        let row: Vec<String> = record?.iter().map(str::to_string).collect();
        let numeric = row.iter().all(|s| Rational::parse_coordinate(s).is_ok() || s.parse::<f64>().is_ok());
        if k == 0 && !numeric {
            continue;
        }
        rows.push(row);
    }
    let m = rows.first().map(Vec::len).ok_or_else(|| Error::Parse("no points".into()))?;
    Ok(RawConfig { m, rows })
}

pub fn parse_config(text: &str, format: InputFormat) -> Result<RawConfig> {
    match format {
        InputFormat::Json => parse_json(text),
        InputFormat::Csv => parse_csv(text),
    }
}

/// Reads a configuration file, choosing the format from its extension.
pub fn load_config(path: &Path, mode: Option<Mode>) -> Result<LoadedConfig> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text, InputFormat::from_path(path))?.resolve(mode)
}

/// `{"m": .., "points": ..}` with coordinates as decimal strings.
pub fn config_to_json<T: Scalar>(config: &PointConfig<T>) -> Value {
    let points: Vec<Vec<String>> =
        config.points().iter().map(|p| p.iter().map(Scalar::to_decimal_string).collect()).collect();
    serde_json::json!({ "m": config.dim(), "points": points })
}

pub fn write_json<S: Serialize, W: Write>(value: &S, mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

pub fn write_csv<S: Serialize, W: Write>(rows: &[S], out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush()?;
    Ok(())
}
