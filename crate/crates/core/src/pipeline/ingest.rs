use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::mapping::ColumnMapping;
use crate::error::{Error, Result};
use crate::signal::{BoomTemperaturePair, ChannelId, Signal};

/// Drop bookkeeping key for rows rejected because of their timestamp.
pub const TIMESTAMP_KEY: &str = "timestamp";
/// Drop bookkeeping key for rows missing either boom ambient value.
pub const AMBIENT_KEY: &str = "boom_ambient";

#[derive(Debug, Clone, PartialEq)]
pub struct Ingested {
    pub signals: Vec<Signal>,
    pub ambient: Option<BoomTemperaturePair>,
    pub stats: IngestStats,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestStats {
    /// Data rows read (header and comments excluded).
    pub rows_read: usize,
    /// Rows dropped per channel name (or [`TIMESTAMP_KEY`] / [`AMBIENT_KEY`]).
    pub dropped: BTreeMap<String, usize>,
}

fn is_comment(line: &str) -> bool {
    line.starts_with('#') || line.starts_with("//")
}

/// Reads a delimited kelvin-domain table into one [`Signal`] per mapped channel.
///
/// Rows whose timestamp is missing, unparseable or not increasing are dropped
/// for every channel; missing or sentinel values drop the row for that channel only.
pub fn ingest(path: &Path, mapping: &ColumnMapping) -> Result<Ingested> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !is_comment(l));

    let header: Option<Vec<String>> = if mapping.header {
        let (_, line) = lines.next().ok_or_else(|| Error::NoValidRows(path.to_path_buf()))?;
        Some(
            mapping
                .delimiter
                .split(line)
                .into_iter()
                .map(|s| s.trim_matches('"').to_string())
                .collect(),
        )
    } else {
        None
    };
    let rows: Vec<(usize, Vec<&str>)> = lines.map(|(n, l)| (n, mapping.delimiter.split(l))).collect();
    let width = header
        .as_ref()
        .map(Vec::len)
        .or_else(|| rows.first().map(|(_, r)| r.len()))
        .ok_or_else(|| Error::NoValidRows(path.to_path_buf()))?;

    let resolve = |c: &super::mapping::ColumnRef| c.resolve(header.as_deref(), width);
    let ts_col = resolve(&mapping.timestamp)?;
    let channel_cols: Vec<(ChannelId, usize)> = mapping
        .channels
        .iter()
        .map(|(ch, c)| Ok((*ch, resolve(c)?)))
        .collect::<Result<_>>()?;
    let ambient_cols = match (&mapping.boom1_ambient, &mapping.boom2_ambient) {
        (Some(a), Some(b)) => Some((resolve(a)?, resolve(b)?)),
        _ => None,
    };

    let mut stats = IngestStats {
        rows_read: rows.len(),
        ..IngestStats::default()
    };
    let mut series: Vec<(Vec<f64>, Vec<f64>)> = vec![(Vec::new(), Vec::new()); channel_cols.len()];
    let mut ambient = (Vec::new(), Vec::new(), Vec::new());
    let mut last_ts = f64::NEG_INFINITY;
    let mut bump = |key: &str| *stats.dropped.entry(key.to_string()).or_insert(0) += 1;

    let value = |row: &[&str], col: usize| -> Option<f64> {
        let field = row.get(col).copied().unwrap_or("").trim_matches('"');
        let v: f64 = field.parse().ok()?;
        (!mapping.is_missing(field, v)).then_some(v)
    };

    for (_, row) in &rows {
        let Some(ts) = value(row, ts_col).map(|t| t * mapping.timestamp_scale) else {
            bump(TIMESTAMP_KEY);
            continue;
        };
        if ts <= last_ts {
            bump(TIMESTAMP_KEY);
            continue;
        }
        last_ts = ts;
        for ((channel, col), (times, samples)) in channel_cols.iter().zip(series.iter_mut()) {
            match value(row, *col) {
                Some(v) => {
                    times.push(ts);
                    samples.push(v);
                }
                None => bump(channel.name()),
            }
        }
        if let Some((c1, c2)) = ambient_cols {
            match (value(row, c1), value(row, c2)) {
                (Some(a), Some(b)) => {
                    ambient.0.push(ts);
                    ambient.1.push(a);
                    ambient.2.push(b);
                }
                _ => bump(AMBIENT_KEY),
            }
        }
    }

    let mut signals = Vec::new();
    for ((channel, _), (times, samples)) in channel_cols.iter().zip(series) {
        if samples.is_empty() {
            log::warn!("{}: channel {channel} has no valid samples", path.display());
            continue;
        }
        let mut signal = Signal::new(*channel, times, samples)?;
        if let Some(sol) = mapping.sol {
            signal = signal.with_sol(sol);
        }
        signals.push(signal);
    }
    let ambient = (!ambient.0.is_empty()).then(|| BoomTemperaturePair::timed(ambient.0, ambient.1, ambient.2));
    if signals.is_empty() && ambient.is_none() {
        return Err(Error::NoValidRows(path.to_path_buf()));
    }
    Ok(Ingested {
        signals,
        ambient,
        stats,
    })
}
