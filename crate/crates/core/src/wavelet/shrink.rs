//! Robust noise estimation and universal soft shrinkage.

use crate::error::{Error, Result};
use crate::stats;

/// Ratio between the MAD and the standard deviation of a Gaussian.
pub const MAD_TO_SIGMA: f64 = 0.6745;

/// `sigma = MAD / 0.6745` over a band of coefficients (or any noise-dominated series).
pub fn estimate_sigma(coefficients: &[f64]) -> Result<f64> {
    if coefficients.len() < 2 {
        return Err(Error::TooShort {
            needed: 2,
            got: coefficients.len(),
        });
    }
    let mad = stats::mad(coefficients).expect("non-empty");
    Ok(mad / MAD_TO_SIGMA)
}

/// Universal threshold `sigma * sqrt(2 ln n)`.
pub fn universal_threshold(sigma: f64, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::TooShort { needed: 2, got: n });
    }
    if sigma.is_nan() || sigma < 0.0 {
        return Err(Error::InvalidParameter(format!("noise sigma must be >= 0, got {sigma}")));
    }
    Ok(sigma * (2.0 * (n as f64).ln()).sqrt())
}

#[inline]
pub fn soft_threshold_value(c: f64, theta: f64) -> f64 {
    if c >= theta {
        c - theta
    } else if c <= -theta {
        c + theta
    } else {
        0.0
    }
}

/// Shrinks every coefficient toward zero by `theta`, zeroing the dead zone `|c| < theta`.
pub fn soft_threshold(coefficients: &[f64], theta: f64) -> Result<Vec<f64>> {
    if theta.is_nan() || theta < 0.0 {
        return Err(Error::InvalidParameter(format!("threshold must be >= 0, got {theta}")));
    }
    Ok(coefficients
        .iter()
        .map(|&c| soft_threshold_value(c, theta))
        .collect())
}
