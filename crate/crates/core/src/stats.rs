//! Small robust-statistics helpers shared by the shrinkage estimators and metrics.

/// Median of `values`. Even lengths use the mean of the two central order statistics.
///
/// Returns `None` for an empty slice.
pub fn median(values: &[f64]) -> Option<f64> {
    let n = values.len();
    if n == 0 {
        return None;
    }
    let mut buf = values.to_vec();
    let mid = n / 2;
    let (lower, upper, _) = buf.select_nth_unstable_by(mid, f64::total_cmp);
    let upper = *upper;
    if n % 2 == 1 {
        Some(upper)
    } else {
        // the largest element below `mid` is the other central order statistic
        let lower = lower.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Some(0.5 * (lower + upper))
    }
}

/// Median absolute deviation about the median, `med{|x - med{x}|}`.
pub fn mad(values: &[f64]) -> Option<f64> {
    let center = median(values)?;
    let dev: Vec<f64> = values.iter().map(|v| (v - center).abs()).collect();
    median(&dev)
}

pub fn mean(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        None
    } else {
        Some(values.iter().sum::<f64>() / values.len() as f64)
    }
}

/// Sample standard deviation (divisor `N - 1`). `None` below two samples.
pub fn sample_std(values: &[f64]) -> Option<f64> {
    if values.len() < 2 {
        return None;
    }
    let m = mean(values)?;
    let ss: f64 = values.iter().map(|v| (v - m) * (v - m)).sum();
    Some((ss / (values.len() - 1) as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_odd_and_even() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), Some(2.0));
        assert_eq!(median(&[4.0, 1.0, 3.0, 2.0]), Some(2.5));
        assert_eq!(median(&[7.0]), Some(7.0));
        assert_eq!(median(&[]), None);
    }

    #[test]
    fn mad_hand_computed() {
        // median 3, deviations [2,1,0,1,2,7] -> median 1.5
        assert_eq!(mad(&[1.0, 2.0, 3.0, 4.0, 5.0, 10.0]).unwrap(), 1.5);
    }

    #[test]
    fn sample_std_uses_n_minus_one() {
        assert!((sample_std(&[-1.0, 1.0]).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(sample_std(&[1.0]), None);
    }
}
