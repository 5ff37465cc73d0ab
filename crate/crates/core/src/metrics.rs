//! Reconstruction metrics, the residual-noise comparison table and the timing harness.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::denoise::{denoise, DenoiseConfig, DenoiseResult, Method};
use crate::error::{Error, Result};
use crate::stats;

/// Percentage root-mean-square difference `100 * sqrt(sum (x - y)^2 / sum x^2)`.
pub fn prd(reference: &[f64], reconstructed: &[f64]) -> Result<f64> {
    if reference.len() != reconstructed.len() {
        return Err(Error::LengthMismatch {
            left: reference.len(),
            right: reconstructed.len(),
        });
    }
    if reference.is_empty() {
        return Err(Error::EmptyInput);
    }
    let energy: f64 = reference.iter().map(|v| v * v).sum();
    if energy == 0.0 {
        return Err(Error::ZeroEnergy);
    }
    let diff: f64 = reference
        .iter()
        .zip(reconstructed)
        .map(|(x, y)| (x - y) * (x - y))
        .sum();
    Ok(100.0 * (diff / energy).sqrt())
}

/// Sample standard deviation of a noise residual.
pub fn residual_sigma(residual: &[f64]) -> Result<f64> {
    stats::sample_std(residual).ok_or(Error::TooShort {
        needed: 2,
        got: residual.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub method: Method,
    /// PRD of the denoised series against the raw input, percent.
    pub prd: f64,
    /// Standard deviation of the removed noise, kelvin.
    pub residual_sigma: f64,
    pub n_samples: usize,
    /// Wall-clock seconds (median over repetitions when benchmarked).
    pub elapsed: f64,
    pub config: String,
}

impl MetricsReport {
    pub fn from_result(
        input: &[f64],
        result: &DenoiseResult,
        config: &DenoiseConfig,
        elapsed: f64,
    ) -> Result<Self> {
        Ok(MetricsReport {
            method: result.method,
            prd: prd(input, &result.denoised)?,
            residual_sigma: residual_sigma(&result.residual)?,
            n_samples: input.len(),
            elapsed,
            config: config.summary(),
        })
    }

    pub const DELIMITED_HEADER: &'static str = "method,prd_percent,residual_sigma_k,n_samples,elapsed_s,config";

    pub fn to_delimited(&self) -> String {
        format!(
            "{},{:.6},{:.6},{},{:.6e},\"{}\"",
            self.method, self.prd, self.residual_sigma, self.n_samples, self.elapsed, self.config
        )
    }
}

// Instant resolution can round a very fast run down to zero.
const TIMER_FLOOR: f64 = 1e-9;

/// Times each configuration on the same input.
///
/// One warm-up run per method is discarded, then `repetitions` runs are timed
/// serially and the median is reported. Metrics come from the first timed run.
pub fn run_benchmark(
    methods: &[DenoiseConfig],
    signal: &[f64],
    repetitions: usize,
) -> Result<Vec<MetricsReport>> {
    if repetitions < 3 {
        return Err(Error::InvalidParameter(format!(
            "benchmark needs at least 3 repetitions, got {repetitions}"
        )));
    }
    let mut reports = Vec::with_capacity(methods.len());
    for config in methods {
        denoise(signal, config)?;
        let mut timings = Vec::with_capacity(repetitions);
        let mut first = None;
        for _ in 0..repetitions {
            let start = Instant::now();
            let result = denoise(signal, config)?;
            timings.push(start.elapsed().as_secs_f64().max(TIMER_FLOOR));
            first.get_or_insert(result);
        }
        let elapsed = stats::median(&timings).expect("repetitions >= 3");
        let result = first.expect("repetitions >= 3");
        reports.push(MetricsReport::from_result(signal, &result, config, elapsed)?);
    }
    Ok(reports)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SigmaRow {
    pub method: Method,
    pub dataset: String,
    pub sigma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SigmaComparison {
    pub rows: Vec<SigmaRow>,
    /// Methods whose perturbed-input sigma exceeds their reference sigma by more than 50 %.
    pub flagged: Vec<Method>,
}

/// Allowed growth of the residual sigma from reference to perturbed data.
pub const SIGMA_GROWTH_LIMIT: f64 = 1.5;

/// Builds the method x dataset sigma table and flags methods whose noise estimate
/// inflates on perturbed data (they are absorbing signal structure into the noise).
///
/// Methods missing from either map simply get fewer rows and are never flagged.
pub fn compare_against_reference(
    reference_label: &str,
    reference: &BTreeMap<Method, f64>,
    perturbed_label: &str,
    perturbed: &BTreeMap<Method, f64>,
) -> SigmaComparison {
    let mut rows = Vec::new();
    let mut flagged = Vec::new();
    for method in Method::ALL {
        let clean = reference.get(&method);
        let noisy = perturbed.get(&method);
        if let Some(&sigma) = clean {
            rows.push(SigmaRow {
                method,
                dataset: reference_label.to_string(),
                sigma,
            });
        }
        if let Some(&sigma) = noisy {
            rows.push(SigmaRow {
                method,
                dataset: perturbed_label.to_string(),
                sigma,
            });
        }
        if let (Some(&c), Some(&p)) = (clean, noisy) {
            // relative slack keeps an exact 1.5x ratio from flipping on rounding
            if p > SIGMA_GROWTH_LIMIT * c * (1.0 + 1e-12) {
                flagged.push(method);
            }
        }
    }
    SigmaComparison { rows, flagged }
}

impl SigmaComparison {
    pub fn to_delimited(&self) -> String {
        let mut out = String::from("method,dataset,sigma_k,flagged\n");
        for row in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{:.6},{}",
                row.method,
                row.dataset,
                row.sigma,
                self.flagged.contains(&row.method)
            );
        }
        out
    }
}
