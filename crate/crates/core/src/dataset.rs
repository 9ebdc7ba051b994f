//! Correlation datasets and their CSV/JSON serialisation.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

/// Provenance of a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "exact")]
    Exact,
    #[serde(rename = "finiteN")]
    FiniteN,
    #[serde(rename = "airy")]
    Airy,
    #[serde(rename = "pearcey")]
    Pearcey,
    #[serde(rename = "mc")]
    MonteCarlo,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::FiniteN => "finiteN",
            Method::Airy => "airy",
            Method::Pearcey => "pearcey",
            Method::MonteCarlo => "mc",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "exact" => Method::Exact,
            "finiteN" => Method::FiniteN,
            "airy" => Method::Airy,
            "pearcey" => Method::Pearcey,
            "mc" => Method::MonteCarlo,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub alpha: u8,
    pub alphaprime: u8,
    pub j: i64,
    pub t: f64,
    pub value: f64,
    pub stderr: f64,
    pub method: Method,
}

impl Row {
    pub fn key(&self) -> (u8, u8, i64, u64) {
        (self.alpha, self.alphaprime, self.j, self.t.to_bits())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => Format::Json,
            _ => Format::Csv,
        }
    }
}

const HEADER: &str = "alpha,alphaprime,j,t,value,stderr,method";

/// Correlation values indexed by `(α, α′, j, t)` plus free-form metadata.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CorrelationDataset {
    pub meta: BTreeMap<String, Value>,
    pub rows: Vec<Row>,
}

impl CorrelationDataset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, row: Row) {
        self.rows.push(row);
    }

    pub fn extend(&mut self, other: CorrelationDataset) {
        self.rows.extend(other.rows);
        self.meta.extend(other.meta);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn get(&self, alpha: u8, alphaprime: u8, j: i64, t: f64) -> Option<&Row> {
        self.rows
            .iter()
            .find(|r| r.alpha == alpha && r.alphaprime == alphaprime && r.j == j && r.t == t)
    }

    /// Values of one `(α, α′)` block at time `t`, ordered by `j`.
    pub fn slice(&self, alpha: u8, alphaprime: u8, t: f64) -> Vec<(i64, f64)> {
        let mut out: Vec<(i64, f64)> = self
            .rows
            .iter()
            .filter(|r| r.alpha == alpha && r.alphaprime == alphaprime && r.t == t)
            .map(|r| (r.j, r.value))
            .collect();
        out.sort_by_key(|x| x.0);
        out
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.meta {
            let _ = writeln!(s, "# {k}: {v}");
        }
        s.push_str(HEADER);
        s.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{}",
                r.alpha,
                r.alphaprime,
                r.j,
                r.t,
                r.value,
                r.stderr,
                r.method.as_str()
            );
        }
        s
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("dataset serialises");
        s.push('\n');
        s
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut ds = CorrelationDataset::new();
        let mut header_seen = false;
        for (lineno, line) in text.lines().enumerate() {
            let bad = |what: &str| Error::Io(format!("line {}: {what}", lineno + 1));
            if let Some(rest) = line.strip_prefix('#') {
                let (k, v) = rest
                    .trim_start()
                    .split_once(": ")
                    .ok_or_else(|| bad("malformed metadata"))?;
                let value = serde_json::from_str(v).map_err(|e| bad(&e.to_string()))?;
                ds.meta.insert(k.to_string(), value);
                continue;
            }
            if !header_seen {
                if line.trim() != HEADER {
                    return Err(bad("unexpected header"));
                }
                header_seen = true;
                continue;
            }
            if line.trim().is_empty() {
                continue;
            }
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 7 {
                return Err(bad("expected 7 columns"));
            }
            let num = |s: &str| s.parse::<f64>().map_err(|_| bad("bad number"));
            ds.rows.push(Row {
                alpha: f[0].parse().map_err(|_| bad("bad alpha"))?,
                alphaprime: f[1].parse().map_err(|_| bad("bad alphaprime"))?,
                j: f[2].parse().map_err(|_| bad("bad j"))?,
                t: num(f[3])?,
                value: num(f[4])?,
                stderr: num(f[5])?,
                method: Method::parse(f[6]).ok_or_else(|| bad("unknown method"))?,
            });
        }
        if !header_seen {
            return Err(Error::Io("missing header".into()));
        }
        Ok(ds)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Io(e.to_string()))
    }

    /// Parses either format, deciding by the first non-blank character.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            Self::from_json(text)
        } else {
            Self::from_csv(text)
        }
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: &Path, format: Format) -> Result<()> {
        let text = match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        };
        std::fs::write(path, text)?;
        Ok(())
    }
}
