//! Natural cubic spline interpolation and extrema envelopes.

use crate::error::{Error, Result};

/// Natural cubic spline (zero second derivative at both end knots).
///
/// Stored per interval as `y_i + b_i d + c_i d^2 + e_i d^3` with `d = t - x_i`.
#[derive(Debug, Clone)]
pub struct NaturalSpline {
    xs: Vec<f64>,
    coef: Vec<[f64; 4]>,
}

impl NaturalSpline {
    /// `xs` must be strictly increasing and hold at least two knots.
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        let k = xs.len();
        if k < 2 || ys.len() != k {
            return Err(Error::InvalidParameter(format!(
                "spline needs >= 2 knots with matching values, got {} / {}",
                k,
                ys.len()
            )));
        }
        if xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter("spline knots not strictly increasing".into()));
        }
        let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
        let mut second = vec![0.0; k];
        if k > 2 {
            // tridiagonal system for the interior second derivatives (Thomas algorithm)
            let m = k - 2;
            let mut diag = vec![0.0; m];
            let mut rhs = vec![0.0; m];
            for i in 0..m {
                diag[i] = 2.0 * (h[i] + h[i + 1]);
                rhs[i] = 6.0 * ((ys[i + 2] - ys[i + 1]) / h[i + 1] - (ys[i + 1] - ys[i]) / h[i]);
            }
            for i in 1..m {
                let w = h[i] / diag[i - 1];
                diag[i] -= w * h[i];
                rhs[i] -= w * rhs[i - 1];
            }
            second[m] = rhs[m - 1] / diag[m - 1];
            for i in (0..m - 1).rev() {
                second[i + 1] = (rhs[i] - h[i + 1] * second[i + 2]) / diag[i];
            }
        }
        let coef = (0..k - 1)
            .map(|i| {
                let hi = h[i];
                [
                    ys[i],
                    (ys[i + 1] - ys[i]) / hi - hi * (2.0 * second[i] + second[i + 1]) / 6.0,
                    0.5 * second[i],
                    (second[i + 1] - second[i]) / (6.0 * hi),
                ]
            })
            .collect();
        Ok(NaturalSpline { xs, coef })
    }

    #[inline]
    fn eval_in(&self, i: usize, t: f64) -> f64 {
        let [a, b, c, e] = self.coef[i];
        let d = t - self.xs[i];
        a + d * (b + d * (c + d * e))
    }

    pub fn eval(&self, t: f64) -> f64 {
        let last = self.coef.len() - 1;
        let i = self.xs.partition_point(|&x| x <= t).saturating_sub(1).min(last);
        self.eval_in(i, t)
    }

    /// Evaluates at `0, 1, ..., n-1`.
    pub fn eval_grid(&self, n: usize) -> Vec<f64> {
        let mut out = vec![0.0; n];
        self.eval_grid_into(&mut out);
        out
    }

    /// Evaluates at `0, 1, ..., out.len()-1`.
    pub fn eval_grid_into(&self, out: &mut [f64]) {
        let n = out.len();
        let last = self.coef.len() - 1;
        let mut t = 0;
        for (i, &[a, b, c, e]) in self.coef.iter().enumerate() {
            let stop = if i == last {
                n
            } else {
                (self.xs[i + 1].ceil().max(0.0) as usize).clamp(t, n)
            };
            let x0 = self.xs[i];
            for (k, v) in out[t..stop].iter_mut().enumerate() {
                let d = (t + k) as f64 - x0;
                *v = a + d * (b + d * (c + d * e));
            }
            t = stop;
        }
    }
}

/// Spline envelope through `x[indices]`, with the two extrema nearest each end
/// mirrored across that end to anchor the boundaries.
pub fn envelope(x: &[f64], indices: &[usize]) -> Result<Vec<f64>> {
    let mut out = vec![0.0; x.len()];
    envelope_into(x, indices, &mut out)?;
    Ok(out)
}

pub(crate) fn envelope_into(x: &[f64], indices: &[usize], out: &mut [f64]) -> Result<()> {
    let n = x.len();
    if indices.is_empty() || n < 2 {
        return Err(Error::InvalidParameter(
            "envelope needs at least one extremum".into(),
        ));
    }
    let last = (n - 1) as f64;
    let mut knots: Vec<(f64, f64)> = Vec::with_capacity(indices.len() + 4);
    for &i in indices.iter().take(2).rev() {
        knots.push((-(i as f64), x[i]));
    }
    knots.extend(indices.iter().map(|&i| (i as f64, x[i])));
    for &i in indices.iter().rev().take(2) {
        knots.push((2.0 * last - i as f64, x[i]));
    }
    // an extremum sitting on an end sample mirrors onto itself
    knots.dedup_by(|b, a| b.0 <= a.0);
    let (xs, ys) = knots.into_iter().unzip();
    NaturalSpline::new(xs, ys)?.eval_grid_into(out);
    Ok(())
}
