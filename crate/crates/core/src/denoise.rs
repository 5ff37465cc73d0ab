//! Shared result type and a single entry point that dispatches on the method.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::emd::{self, SiftConfig};
use crate::error::{Error, Result};
use crate::ma::{self, MaConfig};
use crate::wavelet::{self, WaveletSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Ma,
    Dwt,
    Hht,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Ma, Method::Dwt, Method::Hht];

    pub fn name(self) -> &'static str {
        match self {
            Method::Ma => "ma",
            Method::Dwt => "dwt",
            Method::Hht => "hht",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ma" => Ok(Method::Ma),
            "dwt" => Ok(Method::Dwt),
            "hht" => Ok(Method::Hht),
            other => Err(Error::Config(format!("unknown method '{other}'"))),
        }
    }
}

/// Noise level and shrinkage threshold applied to one or more bands.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdReport {
    /// Robust noise estimate, kelvin.
    pub sigma: f64,
    /// Universal threshold `sigma * sqrt(2 ln N)`, kelvin.
    pub theta: f64,
    /// Wavelet levels or IMF indices (1-based) this threshold was applied to.
    pub levels_thresholded: Vec<usize>,
}

/// Output of any denoiser: `denoised + residual == input` per sample.
#[derive(Debug, Clone, PartialEq)]
pub struct DenoiseResult {
    pub method: Method,
    pub denoised: Vec<f64>,
    pub residual: Vec<f64>,
    pub thresholds: Vec<ThresholdReport>,
    /// Non-fatal conditions hit while denoising (safety rails, degenerate selections).
    pub warnings: Vec<String>,
}

impl DenoiseResult {
    pub(crate) fn new(method: Method, input: &[f64], denoised: Vec<f64>) -> Self {
        let residual = input.iter().zip(&denoised).map(|(x, y)| x - y).collect();
        DenoiseResult {
            method,
            denoised,
            residual,
            thresholds: Vec::new(),
            warnings: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.denoised.len()
    }

    pub fn is_empty(&self) -> bool {
        self.denoised.is_empty()
    }
}

/// Method plus its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum DenoiseConfig {
    Ma(MaConfig),
    Dwt {
        wavelet: WaveletSpec,
        /// `None` selects the maximum useful level for each input length.
        levels: Option<usize>,
    },
    Hht(SiftConfig),
}

impl DenoiseConfig {
    pub fn method(&self) -> Method {
        match self {
            DenoiseConfig::Ma(_) => Method::Ma,
            DenoiseConfig::Dwt { .. } => Method::Dwt,
            DenoiseConfig::Hht(_) => Method::Hht,
        }
    }

    /// The configuration used in the reference comparison for `method`:
    /// centered span-9 MA, Coiflet-5 at maximum level, default sifting thresholds.
    pub fn default_for(method: Method) -> Self {
        match method {
            Method::Ma => DenoiseConfig::Ma(MaConfig::default()),
            Method::Dwt => DenoiseConfig::Dwt {
                wavelet: WaveletSpec::coif5(),
                levels: None,
            },
            Method::Hht => DenoiseConfig::Hht(SiftConfig::default()),
        }
    }

    /// Short human-readable parameter summary for reports.
    pub fn summary(&self) -> String {
        match self {
            DenoiseConfig::Ma(cfg) => format!("span={} mode={}", cfg.span, cfg.mode),
            DenoiseConfig::Dwt { wavelet, levels } => format!(
                "wavelet={} levels={}",
                wavelet.name(),
                levels.map_or_else(|| "auto".to_string(), |j| j.to_string())
            ),
            DenoiseConfig::Hht(cfg) => format!(
                "theta1={} theta2={} alpha={} max_siftings={} max_imfs={}",
                cfg.theta1, cfg.theta2, cfg.alpha, cfg.max_siftings, cfg.max_imfs
            ),
        }
    }
}

pub fn denoise(x: &[f64], config: &DenoiseConfig) -> Result<DenoiseResult> {
    match config {
        DenoiseConfig::Ma(cfg) => ma::moving_average(x, cfg),
        DenoiseConfig::Dwt { wavelet, levels } => {
            wavelet::denoise_dwt(x, wavelet, *levels).map(|(result, _)| result)
        }
        DenoiseConfig::Hht(cfg) => emd::denoise_hht(x, cfg).map(|(result, _)| result),
    }
}
