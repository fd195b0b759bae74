use std::io::Write;

use num_complex::Complex;
use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;
use serde_json::value::RawValue;

/// A scalar cell of a report row.
#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Num(f64),
    Int(i64),
    Bool(bool),
    Text(String),
    Null,
}

/// 17 significant digits, so every `f64` round-trips.
pub fn format_num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "NaN".into()
    } else if x > 0.0 {
        "Infinity".into()
    } else {
        "-Infinity".into()
    }
}

impl Field {
    fn csv_text(&self) -> String {
        match self {
            Field::Num(x) => format_num(*x),
            Field::Int(i) => i.to_string(),
            Field::Bool(b) => b.to_string(),
            Field::Text(s) => s.clone(),
            Field::Null => String::new(),
        }
    }
}

impl Serialize for Field {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Field::Num(x) if x.is_finite() => {
                let raw = RawValue::from_string(format_num(*x)).map_err(serde::ser::Error::custom)?;
                raw.serialize(s)
            }
            Field::Num(x) => s.serialize_str(&format_num(*x)),
            Field::Int(i) => s.serialize_i64(*i),
            Field::Bool(b) => s.serialize_bool(*b),
            Field::Text(t) => s.serialize_str(t),
            Field::Null => s.serialize_none(),
        }
    }
}

/// Ordered record of named fields.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Record(pub Vec<(String, Field)>);

impl Record {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn num(mut self, key: &str, x: f64) -> Self {
        self.0.push((key.into(), Field::Num(x)));
        self
    }

    pub fn opt_num(mut self, key: &str, x: Option<f64>) -> Self {
        self.0.push((key.into(), x.map_or(Field::Null, Field::Num)));
        self
    }

    /// Adds `key_re` and `key_im`.
    pub fn complex(self, key: &str, z: Complex<f64>) -> Self {
        self.num(&format!("{key}_re"), z.re).num(&format!("{key}_im"), z.im)
    }

    pub fn opt_complex(self, key: &str, z: Option<Complex<f64>>) -> Self {
        self.opt_num(&format!("{key}_re"), z.map(|v| v.re)).opt_num(&format!("{key}_im"), z.map(|v| v.im))
    }

    pub fn int(mut self, key: &str, i: i64) -> Self {
        self.0.push((key.into(), Field::Int(i)));
        self
    }

    pub fn flag(mut self, key: &str, b: bool) -> Self {
        self.0.push((key.into(), Field::Bool(b)));
        self
    }

    pub fn text(mut self, key: &str, t: impl Into<String>) -> Self {
        self.0.push((key.into(), Field::Text(t.into())));
        self
    }

    pub fn opt_text(mut self, key: &str, t: Option<String>) -> Self {
        self.0.push((key.into(), t.map_or(Field::Null, Field::Text)));
        self
    }

    pub fn keys(&self) -> Vec<&str> {
        self.0.iter().map(|(k, _)| k.as_str()).collect()
    }
}

impl Serialize for Record {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportEnvelope {
    pub command: String,
    pub version: String,
    pub parameters: Record,
    pub rows: Vec<Record>,
    pub summary: Record,
    pub tolerances: Record,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
}

impl ReportEnvelope {
    pub fn new(command: &str, parameters: Record) -> Self {
        Self {
            command: command.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            parameters,
            rows: Vec::new(),
            summary: Record::new(),
            tolerances: Record::new(),
            passed: true,
            wall_time_s: None,
        }
    }

    pub fn write_json(&self, out: &mut impl Write) -> std::io::Result<()> {
        serde_json::to_writer_pretty(&mut *out, self)?;
        writeln!(out)
    }

    /// Rows only, one column per field of the first row.
    pub fn write_csv(&self, out: &mut impl Write) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        if let Some(first) = self.rows.first() {
            w.write_record(first.keys())?;
        }
        for row in &self.rows {
            w.write_record(row.0.iter().map(|(_, v)| v.csv_text()))?;
        }
        w.flush()
    }
}
