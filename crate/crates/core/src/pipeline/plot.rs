//! Self-contained SVG overlay of raw, denoised and residual traces.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

const WIDTH: f64 = 960.0;
const PANEL_HEIGHT: f64 = 260.0;
const MARGIN: f64 = 48.0;
/// Traces longer than this are reduced to per-column min/max pairs.
const MAX_COLUMNS: usize = 1200;

fn decimate(values: &[f64]) -> Vec<(usize, f64)> {
    if values.len() <= MAX_COLUMNS {
        return values.iter().copied().enumerate().collect();
    }
    let bucket = values.len().div_ceil(MAX_COLUMNS);
    let mut out = Vec::with_capacity(2 * MAX_COLUMNS);
    for (b, chunk) in values.chunks(bucket).enumerate() {
        let base = b * bucket;
        let (mut lo, mut hi) = (0, 0);
        for (i, v) in chunk.iter().enumerate() {
            if *v < chunk[lo] {
                lo = i;
            }
            if *v > chunk[hi] {
                hi = i;
            }
        }
        let (first, second) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        out.push((base + first, chunk[first]));
        if second != first {
            out.push((base + second, chunk[second]));
        }
    }
    out
}

fn range(traces: &[&[f64]]) -> (f64, f64) {
    let (lo, hi) = traces
        .iter()
        .flat_map(|t| t.iter())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(*v), hi.max(*v)));
    if hi - lo < 1e-12 {
        (lo - 0.5, hi + 0.5)
    } else {
        let pad = 0.05 * (hi - lo);
        (lo - pad, hi + pad)
    }
}

fn polyline(out: &mut String, values: &[f64], n: usize, top: f64, (lo, hi): (f64, f64), color: &str, dash: bool) {
    let plot_w = WIDTH - 2.0 * MARGIN;
    let plot_h = PANEL_HEIGHT - 2.0 * MARGIN;
    let denom = (n.max(2) - 1) as f64;
    let _ = write!(
        out,
        r#"<polyline fill="none" stroke="{color}" stroke-width="1"{} points=""#,
        if dash { r#" stroke-dasharray="3,2""# } else { "" }
    );
    for (i, v) in decimate(values) {
        let x = MARGIN + plot_w * i as f64 / denom;
        let y = top + MARGIN + plot_h * (1.0 - (v - lo) / (hi - lo));
        let _ = write!(out, "{x:.2},{y:.2} ");
    }
    out.push_str("\"/>\n");
}

fn panel_frame(out: &mut String, top: f64, (lo, hi): (f64, f64), title: &str) {
    let _ = writeln!(
        out,
        r##"<rect x="{MARGIN}" y="{y}" width="{w}" height="{h}" fill="none" stroke="#888"/>"##,
        y = top + MARGIN,
        w = WIDTH - 2.0 * MARGIN,
        h = PANEL_HEIGHT - 2.0 * MARGIN
    );
    let _ = writeln!(
        out,
        r#"<text x="{MARGIN}" y="{y}" font-size="12">{title}</text>"#,
        y = top + MARGIN - 6.0
    );
    let _ = writeln!(
        out,
        r#"<text x="4" y="{y1}" font-size="10">{hi:.3}</text><text x="4" y="{y2}" font-size="10">{lo:.3}</text>"#,
        y1 = top + MARGIN + 10.0,
        y2 = top + PANEL_HEIGHT - MARGIN
    );
}

fn legend(out: &mut String, top: f64, entries: &[(&str, &str)]) {
    for (k, (label, color)) in entries.iter().enumerate() {
        let x = WIDTH - MARGIN - 150.0;
        let y = top + MARGIN + 14.0 + 14.0 * k as f64;
        let _ = writeln!(
            out,
            r#"<line x1="{x}" y1="{y}" x2="{x2}" y2="{y}" stroke="{color}" stroke-width="2"/><text x="{tx}" y="{ty}" font-size="11">{label}</text>"#,
            x2 = x + 18.0,
            tx = x + 24.0,
            ty = y + 4.0
        );
    }
}

/// Renders the overlay as an SVG string.
pub fn render_svg(raw: &[f64], denoised: &[f64], residual: &[f64], title: &str) -> Result<String> {
    if raw.len() != denoised.len() || raw.len() != residual.len() {
        return Err(Error::LengthMismatch {
            left: raw.len(),
            right: denoised.len().max(residual.len()),
        });
    }
    let n = raw.len();
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{h}" viewBox="0 0 {WIDTH} {h}">
<rect width="100%" height="100%" fill="white"/>"#,
        h = 2.0 * PANEL_HEIGHT
    );
    let title = title.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;");
    let top_range = range(&[raw, denoised]);
    panel_frame(&mut out, 0.0, top_range, &format!("{title} (K)"));
    polyline(&mut out, raw, n, 0.0, top_range, "#1f77b4", true);
    polyline(&mut out, denoised, n, 0.0, top_range, "#d62728", false);
    legend(&mut out, 0.0, &[("raw", "#1f77b4"), ("denoised", "#d62728")]);

    let bottom_range = range(&[residual]);
    panel_frame(&mut out, PANEL_HEIGHT, bottom_range, "residual (K)");
    polyline(&mut out, residual, n, PANEL_HEIGHT, bottom_range, "#2ca02c", false);
    legend(&mut out, PANEL_HEIGHT, &[("residual", "#2ca02c")]);
    out.push_str("</svg>\n");
    Ok(out)
}

/// Writes the overlay to `path`. Returns `false` (and writes nothing) for empty series.
pub fn emit_plot(raw: &[f64], denoised: &[f64], residual: &[f64], title: &str, path: &Path) -> Result<bool> {
    if raw.is_empty() && denoised.is_empty() && residual.is_empty() {
        return Ok(false);
    }
    let svg = render_svg(raw, denoised, residual, title)?;
    std::fs::write(path, svg).map_err(|e| Error::io(path, e))?;
    Ok(true)
}
