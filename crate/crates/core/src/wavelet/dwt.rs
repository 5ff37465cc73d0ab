//! Decimated Mallat pyramid with periodic boundary handling.
//!
//! One analysis step maps a length-`N` (even) band to two length-`N/2` bands:
//!
//! ```text
//! a[k] = sum_j dec_lo[j] * x[(2k + L/2 - j) mod N]
//! d[k] = sum_j dec_hi[j] * x[(2k + L/2 - j) mod N]
//! ```
//!
//! which is an orthogonal map, so synthesis is its transpose. Inputs whose
//! length is not a multiple of `2^J` are first extended on the right by
//! half-sample symmetric reflection; the inverse truncates back to the
//! original length.

use serde::{Deserialize, Serialize};

use super::filters::WaveletSpec;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryMode {
    Periodic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WaveletDecomposition {
    /// Detail bands, finest (`j = 1`) first.
    pub details: Vec<Vec<f64>>,
    /// Approximation band at level `J`.
    pub approximation: Vec<f64>,
    pub levels: usize,
    pub original_length: usize,
    /// Length after extension to a multiple of `2^J`.
    pub padded_length: usize,
    pub boundary_mode: BoundaryMode,
}

impl WaveletDecomposition {
    /// Sum of squares over every band.
    pub fn energy(&self) -> f64 {
        self.details
            .iter()
            .flatten()
            .chain(&self.approximation)
            .map(|c| c * c)
            .sum()
    }

    fn check(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InconsistentDecomposition(msg));
        if self.levels == 0 {
            return bad("zero levels".into());
        }
        if self.details.len() != self.levels {
            return bad(format!(
                "{} detail bands for {} levels",
                self.details.len(),
                self.levels
            ));
        }
        let block = 1usize
            .checked_shl(self.levels as u32)
            .filter(|b| *b <= self.padded_length.max(1))
            .ok_or_else(|| Error::InconsistentDecomposition("too many levels".into()))?;
        if !self.padded_length.is_multiple_of(block) || self.original_length > self.padded_length {
            return bad(format!(
                "padded length {} incompatible with {} levels / original length {}",
                self.padded_length, self.levels, self.original_length
            ));
        }
        for (j, band) in self.details.iter().enumerate() {
            let expected = self.padded_length >> (j + 1);
            if band.len() != expected {
                return bad(format!(
                    "detail level {} has {} coefficients, expected {expected}",
                    j + 1,
                    band.len()
                ));
            }
        }
        if self.approximation.len() != self.padded_length / block {
            return bad(format!(
                "approximation has {} coefficients, expected {}",
                self.approximation.len(),
                self.padded_length / block
            ));
        }
        Ok(())
    }
}

/// Deepest level worth computing for `n` samples: `floor(log2(n / (L - 1)))`, at least 1.
pub fn max_level(n: usize, spec: &WaveletSpec) -> Result<usize> {
    let len = spec.filter_len();
    if n < len {
        return Err(Error::TooShort { needed: len, got: n });
    }
    let ratio = n as f64 / (len - 1) as f64;
    Ok((ratio.log2().floor() as usize).max(1))
}

/// Periodic copy of `x` with `margin` samples on each side.
fn periodic_extend(x: &[f64], margin: usize) -> Vec<f64> {
    let n = x.len();
    let offset = margin % n;
    (0..n + 2 * margin)
        .map(|i| x[(i + n - offset) % n])
        .collect()
}

fn analysis_step(x: &[f64], spec: &WaveletSpec) -> (Vec<f64>, Vec<f64>) {
    let len = spec.filter_len();
    let half = x.len() / 2;
    // ext[i + len] == x[i mod N]
    let ext = periodic_extend(x, len);
    let mut approx = Vec::with_capacity(half);
    let mut detail = Vec::with_capacity(half);
    for k in 0..half {
        // x[(2k + L/2 - j) mod N] == ext[2k + L/2 + L - j]
        let top = 2 * k + len / 2 + len;
        let (mut a, mut d) = (0.0, 0.0);
        for (j, (lo, hi)) in spec.dec_lo.iter().zip(&spec.dec_hi).enumerate() {
            let v = ext[top - j];
            a += lo * v;
            d += hi * v;
        }
        approx.push(a);
        detail.push(d);
    }
    (approx, detail)
}

fn synthesis_step(approx: &[f64], detail: &[f64], spec: &WaveletSpec) -> Vec<f64> {
    let len = spec.filter_len();
    let n = 2 * approx.len();
    let mut acc = vec![0.0; n + 3 * len];
    for (k, (a, d)) in approx.iter().zip(detail).enumerate() {
        // transpose of the analysis step, written with the time-reversed filters:
        // rec_lo[i] = dec_lo[L-1-i] lands on x[2k + i - L/2 + 1]
        let base = 2 * k + len + 1 - len / 2;
        for (i, (lo, hi)) in spec.rec_lo.iter().zip(&spec.rec_hi).enumerate() {
            acc[base + i] += lo * a + hi * d;
        }
    }
    let mut out = vec![0.0; n];
    for (i, v) in acc.into_iter().enumerate() {
        // acc[i] holds x[(i - L) mod N]
        out[(i + n * (len / n + 1) - len) % n] += v;
    }
    out
}

fn symmetric_pad(x: &[f64], target: usize) -> Vec<f64> {
    let n = x.len();
    let mut out = Vec::with_capacity(target);
    out.extend_from_slice(x);
    let mut i = 0;
    while out.len() < target {
        // half-sample reflection about the right end, then bounce
        let period = 2 * n;
        let m = (n + i) % period;
        let idx = if m < n { m } else { period - 1 - m };
        out.push(x[idx]);
        i += 1;
    }
    out
}

/// Forward transform to `levels` levels.
pub fn dwt_forward(x: &[f64], spec: &WaveletSpec, levels: usize) -> Result<WaveletDecomposition> {
    let max = max_level(x.len(), spec)?;
    if levels == 0 || levels > max {
        return Err(Error::InvalidParameter(format!(
            "decomposition level {levels} outside 1..={max} for {} samples",
            x.len()
        )));
    }
    let block = 1usize << levels;
    let padded_length = x.len().div_ceil(block) * block;
    let mut approx = symmetric_pad(x, padded_length);
    let mut details = Vec::with_capacity(levels);
    for _ in 0..levels {
        let (a, d) = analysis_step(&approx, spec);
        details.push(d);
        approx = a;
    }
    Ok(WaveletDecomposition {
        details,
        approximation: approx,
        levels,
        original_length: x.len(),
        padded_length,
        boundary_mode: BoundaryMode::Periodic,
    })
}

/// Inverse transform; returns `original_length` samples.
pub fn dwt_inverse(d: &WaveletDecomposition, spec: &WaveletSpec) -> Result<Vec<f64>> {
    d.check()?;
    let mut approx = d.approximation.clone();
    for detail in d.details.iter().rev() {
        approx = synthesis_step(&approx, detail, spec);
    }
    approx.truncate(d.original_length);
    Ok(approx)
}
