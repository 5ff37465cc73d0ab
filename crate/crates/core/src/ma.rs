//! Equal-weight moving-average smoothing, the baseline method.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::denoise::{DenoiseResult, Method};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MaMode {
    /// `y[n] = mean(x[n-span+1..=n])`, reflected at the left edge.
    Causal,
    /// Window centered on `n`, shrunk symmetrically near both edges.
    Centered,
}

impl fmt::Display for MaMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MaMode::Causal => "causal",
            MaMode::Centered => "centered",
        })
    }
}

impl FromStr for MaMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "causal" => Ok(MaMode::Causal),
            "centered" => Ok(MaMode::Centered),
            other => Err(Error::Config(format!("unknown moving-average mode '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaConfig {
    pub span: usize,
    pub mode: MaMode,
}

impl Default for MaConfig {
    fn default() -> Self {
        MaConfig {
            span: 9,
            mode: MaMode::Centered,
        }
    }
}

impl MaConfig {
    pub fn validate(&self) -> Result<()> {
        if self.span == 0 {
            return Err(Error::InvalidParameter("span must be at least 1".into()));
        }
        if self.mode == MaMode::Centered && self.span.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "centered moving average needs an odd span, got {}",
                self.span
            )));
        }
        Ok(())
    }
}

/// Whole-sample reflection of an out-of-range index into `0..n`.
fn reflect(i: isize, n: usize) -> usize {
    if n == 1 {
        return 0;
    }
    let period = 2 * (n as isize - 1);
    let m = i.rem_euclid(period);
    if m < n as isize {
        m as usize
    } else {
        (period - m) as usize
    }
}

pub fn moving_average(x: &[f64], cfg: &MaConfig) -> Result<DenoiseResult> {
    cfg.validate()?;
    if x.is_empty() {
        return Err(Error::EmptyInput);
    }
    let n = x.len();
    let y: Vec<f64> = match cfg.mode {
        MaMode::Causal => (0..n)
            .map(|i| {
                let s: f64 = (0..cfg.span)
                    .map(|k| x[reflect(i as isize - k as isize, n)])
                    .sum();
                s / cfg.span as f64
            })
            .collect(),
        MaMode::Centered => {
            let half = cfg.span / 2;
            (0..n)
                .map(|i| {
                    let r = half.min(i).min(n - 1 - i);
                    let window = &x[i - r..=i + r];
                    window.iter().sum::<f64>() / window.len() as f64
                })
                .collect()
        }
    };
    Ok(DenoiseResult::new(Method::Ma, x, y))
}
