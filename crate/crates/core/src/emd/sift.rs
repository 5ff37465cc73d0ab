use serde::{Deserialize, Serialize};

use super::extrema::find_extrema_into;
use super::spline::envelope_into;
use crate::error::{Error, Result};

/// Envelope amplitudes below this (kelvin) are left out of the stopping test.
pub const MIN_AMPLITUDE: f64 = 1e-12;

/// Sifting stop rule and safety rails.
///
/// With `m(n)` the envelope mean and `a(n)` the envelope half-spread, sifting
/// stops once `|m/a| < theta1` on at least a `1 - alpha` fraction of the
/// samples and `|m/a| < theta2` everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SiftConfig {
    pub theta1: f64,
    pub theta2: f64,
    pub alpha: f64,
    pub max_siftings: usize,
    pub max_imfs: usize,
}

impl Default for SiftConfig {
    fn default() -> Self {
        SiftConfig {
            theta1: 0.05,
            theta2: 0.5,
            alpha: 0.05,
            max_siftings: 1000,
            max_imfs: 32,
        }
    }
}

impl SiftConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.theta1 > 0.0 && self.theta1 < self.theta2) {
            return Err(Error::InvalidParameter(format!(
                "need 0 < theta1 < theta2, got {} and {}",
                self.theta1, self.theta2
            )));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "alpha must lie in (0, 1), got {}",
                self.alpha
            )));
        }
        if self.max_siftings == 0 || self.max_imfs == 0 {
            return Err(Error::InvalidParameter(
                "max_siftings and max_imfs must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sifted {
    pub imf: Vec<f64>,
    pub iterations: usize,
    /// Sifting stopped on `max_siftings` rather than on the stop rule.
    pub hit_limit: bool,
}

/// Extracts one intrinsic mode function from `x`.
///
/// Each iteration subtracts the envelope mean; the stop rule is checked on the
/// mean just subtracted. Returns `Ok(None)` when `x` has too few extrema to
/// define both envelopes, which ends a decomposition.
pub fn sift(x: &[f64], cfg: &SiftConfig) -> Result<Option<Sifted>> {
    cfg.validate()?;
    let n = x.len();
    let mut h = x.to_vec();
    let mut upper = vec![0.0; n];
    let mut lower = vec![0.0; n];
    let mut maxima = Vec::new();
    let mut minima = Vec::new();
    let mut iterations = 0;
    loop {
        let sortable = n >= 3 && {
            find_extrema_into(&h, &mut maxima, &mut minima)?;
            !maxima.is_empty() && !minima.is_empty() && maxima.len() + minima.len() >= 3
        };
        if !sortable {
            if iterations == 0 {
                return Ok(None);
            }
            // the iterate lost its oscillation; it is as sifted as it gets
            return Ok(Some(Sifted {
                imf: h,
                iterations,
                hit_limit: false,
            }));
        }
        envelope_into(&h, &maxima, &mut upper)?;
        envelope_into(&h, &minima, &mut lower)?;

        let mut evaluated = 0usize;
        let mut above_theta1 = 0usize;
        let mut above_theta2 = false;
        for ((v, u), l) in h.iter_mut().zip(&upper).zip(&lower) {
            let mean = 0.5 * (u + l);
            let amplitude = 0.5 * (u - l).abs();
            *v -= mean;
            if amplitude < MIN_AMPLITUDE {
                continue;
            }
            let e = mean.abs() / amplitude;
            above_theta2 |= e >= cfg.theta2;
            above_theta1 += usize::from(e >= cfg.theta1);
            evaluated += 1;
        }
        iterations += 1;
        let settled = !above_theta2 && (above_theta1 as f64) <= cfg.alpha * evaluated as f64;
        if settled || iterations >= cfg.max_siftings {
            return Ok(Some(Sifted {
                imf: h,
                iterations,
                hit_limit: !settled,
            }));
        }
    }
}
