//! Wavelet-shrinkage denoising.
//!
//! The signal is decomposed with an orthonormal periodic DWT, the noise level is
//! estimated from the finest detail band with the MAD, a single universal
//! threshold is soft-applied to every detail band, and the approximation band is
//! passed through untouched before inverting.

mod dwt;
mod filters;
mod shrink;
mod tables;

pub use dwt::{dwt_forward, dwt_inverse, max_level, BoundaryMode, WaveletDecomposition};
pub use filters::{build_wavelet, WaveletFamily, WaveletSpec, ORTHONORMALITY_TOL};
pub use shrink::{
    estimate_sigma, soft_threshold, soft_threshold_value, universal_threshold, MAD_TO_SIGMA,
};

use crate::denoise::{DenoiseResult, Method, ThresholdReport};
use crate::error::Result;

/// Denoises `x` with `spec`; `levels = None` uses [`max_level`].
pub fn denoise_dwt(
    x: &[f64],
    spec: &WaveletSpec,
    levels: Option<usize>,
) -> Result<(DenoiseResult, ThresholdReport)> {
    let levels = match levels {
        Some(j) => j,
        None => max_level(x.len(), spec)?,
    };
    let mut decomposition = dwt_forward(x, spec, levels)?;
    let sigma = estimate_sigma(&decomposition.details[0])?;
    let theta = universal_threshold(sigma, x.len())?;
    for band in &mut decomposition.details {
        *band = soft_threshold(band, theta)?;
    }
    let denoised = dwt_inverse(&decomposition, spec)?;
    let report = ThresholdReport {
        sigma,
        theta,
        levels_thresholded: (1..=levels).collect(),
    };
    let mut result = DenoiseResult::new(Method::Dwt, x, denoised);
    result.thresholds.push(report.clone());
    Ok((result, report))
}
