//! Column mapping for delimited telemetry tables.
//!
//! The mapping file is plain `key = value` text, one entry per line, `#` starts
//! a comment:
//!
//! ```text
//! timestamp = SCLK           # header name, or 1-based column index
//! timestamp_scale = 1.0      # multiplier to seconds
//! channel.1 = ATS1_TIP       # channel.1 .. channel.6 (or channel.b1_tip ...)
//! channel.4 = 5
//! boom1_ambient = T1         # optional; both needed for the boom minimum
//! boom2_ambient = T2
//! sentinel = 9999.0, -9999   # extra missing-value literals; empty fields always count
//! delimiter = auto           # auto | comma | whitespace | tab | semicolon
//! header = true
//! sol = 120
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signal::ChannelId;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ColumnRef {
    /// 1-based column position.
    Index(usize),
    /// Header name.
    Name(String),
}

impl ColumnRef {
    fn parse(value: &str) -> Result<Self> {
        match value.parse::<usize>() {
            Ok(0) => Err(Error::Config("column indices are 1-based".into())),
            Ok(i) => Ok(ColumnRef::Index(i)),
            Err(_) if !value.is_empty() => Ok(ColumnRef::Name(value.to_string())),
            Err(_) => Err(Error::Config("empty column reference".into())),
        }
    }

    /// Resolves to a 0-based position given the (optional) header row.
    pub fn resolve(&self, header: Option<&[String]>, width: usize) -> Result<usize> {
        match self {
            ColumnRef::Index(i) if *i <= width => Ok(i - 1),
            ColumnRef::Index(i) => Err(Error::Config(format!(
                "column {i} does not exist (table has {width} columns)"
            ))),
            ColumnRef::Name(name) => {
                let header = header.ok_or_else(|| {
                    Error::Config(format!("column '{name}' referenced by name but header = false"))
                })?;
                header
                    .iter()
                    .position(|h| h == name)
                    .ok_or_else(|| Error::Config(format!("column '{name}' not found in header")))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Delimiter {
    Auto,
    Comma,
    Whitespace,
    Tab,
    Semicolon,
}

impl Delimiter {
    pub(crate) fn split(self, line: &str) -> Vec<&str> {
        let resolved = match self {
            Delimiter::Auto if line.contains(',') => Delimiter::Comma,
            Delimiter::Auto if line.contains(';') => Delimiter::Semicolon,
            Delimiter::Auto => Delimiter::Whitespace,
            d => d,
        };
        match resolved {
            Delimiter::Comma => line.split(',').map(str::trim).collect(),
            Delimiter::Semicolon => line.split(';').map(str::trim).collect(),
            Delimiter::Tab => line.split('\t').map(str::trim).collect(),
            _ => line.split_whitespace().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnMapping {
    pub timestamp: ColumnRef,
    pub timestamp_scale: f64,
    pub channels: BTreeMap<ChannelId, ColumnRef>,
    pub boom1_ambient: Option<ColumnRef>,
    pub boom2_ambient: Option<ColumnRef>,
    pub sentinels: Vec<f64>,
    pub delimiter: Delimiter,
    pub header: bool,
    pub sol: Option<i64>,
}

impl ColumnMapping {
    /// Mapping with only a timestamp column; channels are added by the caller.
    pub fn new(timestamp: ColumnRef) -> Self {
        ColumnMapping {
            timestamp,
            timestamp_scale: 1.0,
            channels: BTreeMap::new(),
            boom1_ambient: None,
            boom2_ambient: None,
            sentinels: Vec::new(),
            delimiter: Delimiter::Auto,
            header: true,
            sol: None,
        }
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut timestamp = None;
        let mut mapping = ColumnMapping::new(ColumnRef::Index(1));
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .or_else(|| line.split_once(':'))
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            let bad = |what: &str| Error::Config(format!("line {}: invalid {what} '{value}'", lineno + 1));
            match key {
                "timestamp" => timestamp = Some(ColumnRef::parse(value)?),
                "timestamp_scale" => {
                    mapping.timestamp_scale = value
                        .parse()
                        .ok()
                        .filter(|s: &f64| s.is_finite() && *s > 0.0)
                        .ok_or_else(|| bad("timestamp scale"))?
                }
                "boom1_ambient" => mapping.boom1_ambient = Some(ColumnRef::parse(value)?),
                "boom2_ambient" => mapping.boom2_ambient = Some(ColumnRef::parse(value)?),
                "sentinel" | "sentinels" => {
                    for item in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                        mapping.sentinels.push(item.parse().map_err(|_| bad("sentinel"))?);
                    }
                }
                "delimiter" => {
                    mapping.delimiter = match value {
                        "auto" => Delimiter::Auto,
                        "comma" | "," => Delimiter::Comma,
                        "whitespace" | "space" => Delimiter::Whitespace,
                        "tab" => Delimiter::Tab,
                        "semicolon" | ";" => Delimiter::Semicolon,
                        _ => return Err(bad("delimiter")),
                    }
                }
                "header" => mapping.header = value.parse().map_err(|_| bad("header flag"))?,
                "sol" => mapping.sol = Some(value.parse().map_err(|_| bad("sol"))?),
                _ => {
                    let Some(channel) = key.strip_prefix("channel.") else {
                        return Err(Error::Config(format!("line {}: unknown key '{key}'", lineno + 1)));
                    };
                    let channel: ChannelId = channel.parse()?;
                    if mapping.channels.insert(channel, ColumnRef::parse(value)?).is_some() {
                        return Err(Error::Config(format!("channel {channel} mapped twice")));
                    }
                }
            }
        }
        mapping.timestamp =
            timestamp.ok_or_else(|| Error::Config("mapping has no 'timestamp' entry".into()))?;
        if mapping.channels.is_empty() && mapping.boom1_ambient.is_none() {
            return Err(Error::Config("mapping has no channel entries".into()));
        }
        if mapping.boom1_ambient.is_some() != mapping.boom2_ambient.is_some() {
            log::warn!("only one boom ambient column mapped; no combined minimum will be written");
        }
        Ok(mapping)
    }

    pub(crate) fn is_missing(&self, field: &str, value: f64) -> bool {
        field.is_empty() || !value.is_finite() || self.sentinels.contains(&value)
    }
}
