use crate::error::{Error, Result};

/// Indices of the strict local maxima and minima of `x`.
///
/// A plateau of equal values bounded on both sides by lower (higher) samples
/// counts as one maximum (minimum) at the plateau midpoint, rounded down.
/// The first and last samples are never extrema.
pub fn find_extrema(x: &[f64]) -> Result<(Vec<usize>, Vec<usize>)> {
    let mut maxima = Vec::new();
    let mut minima = Vec::new();
    find_extrema_into(x, &mut maxima, &mut minima)?;
    Ok((maxima, minima))
}

pub(crate) fn find_extrema_into(
    x: &[f64],
    maxima: &mut Vec<usize>,
    minima: &mut Vec<usize>,
) -> Result<()> {
    if x.len() < 3 {
        return Err(Error::TooShort {
            needed: 3,
            got: x.len(),
        });
    }
    maxima.clear();
    minima.clear();
    let n = x.len();
    if x.windows(2).all(|w| w[0] != w[1]) {
        for (i, w) in x.windows(3).enumerate() {
            let up = (w[1] > w[0]) as u8 + (w[1] > w[2]) as u8;
            match up {
                2 => maxima.push(i + 1),
                0 => minima.push(i + 1),
                _ => {}
            }
        }
        return Ok(());
    }
    let mut i = 1;
    while i < n - 1 {
        let start = i;
        let mut end = i;
        while end + 1 < n && x[end + 1] == x[start] {
            end += 1;
        }
        if end >= n - 1 {
            break;
        }
        let (before, here, after) = (x[start - 1], x[start], x[end + 1]);
        if before < here && after < here {
            maxima.push((start + end) / 2);
        } else if before > here && after > here {
            minima.push((start + end) / 2);
        }
        i = end + 1;
    }
    Ok(())
}

/// Number of sign changes, skipping exact zeros.
pub fn zero_crossings(x: &[f64]) -> usize {
    let mut count = 0;
    let mut last = 0.0f64;
    for &v in x {
        if v == 0.0 {
            continue;
        }
        if last != 0.0 && (v > 0.0) != (last > 0.0) {
            count += 1;
        }
        last = v;
    }
    count
}

/// Whether the extrema and zero-crossing counts differ by at most one.
pub fn is_imf_shaped(x: &[f64]) -> bool {
    match find_extrema(x) {
        Ok((maxima, minima)) => {
            let extrema = maxima.len() + minima.len();
            extrema.abs_diff(zero_crossings(x)) <= 1
        }
        Err(_) => true,
    }
}
