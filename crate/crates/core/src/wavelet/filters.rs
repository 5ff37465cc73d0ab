use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::tables::*;
use crate::error::{Error, Result};

/// Tolerance used when checking filter-bank orthonormality.
pub const ORTHONORMALITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WaveletFamily {
    Coiflet,
    Daubechies,
    Symlet,
}

impl WaveletFamily {
    fn prefix(self) -> &'static str {
        match self {
            WaveletFamily::Coiflet => "coif",
            WaveletFamily::Daubechies => "db",
            WaveletFamily::Symlet => "sym",
        }
    }

    /// Orders for which coefficient tables are shipped.
    pub fn supported_orders(self) -> std::ops::RangeInclusive<usize> {
        match self {
            WaveletFamily::Coiflet => 1..=5,
            WaveletFamily::Daubechies => 1..=10,
            WaveletFamily::Symlet => 2..=10,
        }
    }
}

/// Orthonormal two-channel filter bank.
///
/// `dec_hi` is the quadrature mirror of `dec_lo` and the reconstruction filters
/// are their time reverses.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletSpec {
    pub family: WaveletFamily,
    pub order: usize,
    pub dec_lo: Vec<f64>,
    pub dec_hi: Vec<f64>,
    pub rec_lo: Vec<f64>,
    pub rec_hi: Vec<f64>,
}

fn table(family: WaveletFamily, order: usize) -> Option<&'static [f64]> {
    use WaveletFamily::*;
    let t: &'static [f64] = match (family, order) {
        (Coiflet, 1) => &COIF1,
        (Coiflet, 2) => &COIF2,
        (Coiflet, 3) => &COIF3,
        (Coiflet, 4) => &COIF4,
        (Coiflet, 5) => &COIF5,
        (Daubechies, 1) => &DB1,
        (Daubechies, 2) => &DB2,
        (Daubechies, 3) => &DB3,
        (Daubechies, 4) => &DB4,
        (Daubechies, 5) => &DB5,
        (Daubechies, 6) => &DB6,
        (Daubechies, 7) => &DB7,
        (Daubechies, 8) => &DB8,
        (Daubechies, 9) => &DB9,
        (Daubechies, 10) => &DB10,
        (Symlet, 2) => &SYM2,
        (Symlet, 3) => &SYM3,
        (Symlet, 4) => &SYM4,
        (Symlet, 5) => &SYM5,
        (Symlet, 6) => &SYM6,
        (Symlet, 7) => &SYM7,
        (Symlet, 8) => &SYM8,
        (Symlet, 9) => &SYM9,
        (Symlet, 10) => &SYM10,
        _ => return None,
    };
    Some(t)
}

/// Looks up the filter bank for `(family, order)` and checks its orthonormality.
pub fn build_wavelet(family: WaveletFamily, order: usize) -> Result<WaveletSpec> {
    let lo = table(family, order).ok_or_else(|| {
        Error::UnsupportedWavelet(format!("{}{order}", family.prefix()))
    })?;
    let spec = WaveletSpec::from_scaling_filter(family, order, lo.to_vec());
    spec.validate()?;
    Ok(spec)
}

impl WaveletSpec {
    fn from_scaling_filter(family: WaveletFamily, order: usize, dec_lo: Vec<f64>) -> Self {
        let len = dec_lo.len();
        let dec_hi: Vec<f64> = (0..len)
            .map(|i| {
                let sign = if i % 2 == 0 { -1.0 } else { 1.0 };
                sign * dec_lo[len - 1 - i]
            })
            .collect();
        let rec_lo = dec_lo.iter().rev().copied().collect();
        let rec_hi = dec_hi.iter().rev().copied().collect();
        WaveletSpec {
            family,
            order,
            dec_lo,
            dec_hi,
            rec_lo,
            rec_hi,
        }
    }

    /// Coiflet 5, the default denoising wavelet.
    pub fn coif5() -> Self {
        build_wavelet(WaveletFamily::Coiflet, 5).expect("coif5 table is valid")
    }

    pub fn haar() -> Self {
        build_wavelet(WaveletFamily::Daubechies, 1).expect("haar table is valid")
    }

    /// Every shipped filter bank.
    pub fn all_supported() -> Vec<WaveletSpec> {
        [WaveletFamily::Coiflet, WaveletFamily::Daubechies, WaveletFamily::Symlet]
            .into_iter()
            .flat_map(|f| f.supported_orders().map(move |o| (f, o)))
            .map(|(f, o)| build_wavelet(f, o).expect("shipped tables are valid"))
            .collect()
    }

    pub fn filter_len(&self) -> usize {
        self.dec_lo.len()
    }

    pub fn name(&self) -> String {
        format!("{}{}", self.family.prefix(), self.order)
    }

    /// Checks unit DC gain `sqrt(2)`, unit energy, even-shift orthogonality and
    /// the quadrature-mirror relation.
    pub fn validate(&self) -> Result<()> {
        let lo = &self.dec_lo;
        let len = lo.len();
        let fail = |what: String| Err(Error::UnsupportedWavelet(format!("{}: {what}", self.name())));
        if len < 2 || !len.is_multiple_of(2) {
            return fail(format!("filter length {len} is not even"));
        }
        let sum: f64 = lo.iter().sum();
        if (sum - std::f64::consts::SQRT_2).abs() > ORTHONORMALITY_TOL {
            return fail(format!("sum of low-pass taps {sum} != sqrt(2)"));
        }
        for shift in (0..len).step_by(2) {
            let dot: f64 = (0..len - shift).map(|n| lo[n] * lo[n + shift]).sum();
            let expected = if shift == 0 { 1.0 } else { 0.0 };
            if (dot - expected).abs() > ORTHONORMALITY_TOL {
                return fail(format!("autocorrelation at shift {shift} is {dot}"));
            }
        }
        for i in 0..len {
            let mirror = if i % 2 == 0 { -lo[len - 1 - i] } else { lo[len - 1 - i] };
            if self.dec_hi[i] != mirror {
                return fail(format!("high-pass tap {i} is not the quadrature mirror"));
            }
        }
        Ok(())
    }
}

impl fmt::Display for WaveletSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for WaveletSpec {
    type Err = Error;

    /// Parses names like `coif5`, `db4`, `sym8` or `haar`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        if s == "haar" {
            return Ok(WaveletSpec::haar());
        }
        let split = s
            .find(|c: char| c.is_ascii_digit())
            .ok_or_else(|| Error::UnsupportedWavelet(s.clone()))?;
        let (prefix, digits) = s.split_at(split);
        let family = match prefix {
            "coif" => WaveletFamily::Coiflet,
            "db" => WaveletFamily::Daubechies,
            "sym" => WaveletFamily::Symlet,
            _ => return Err(Error::UnsupportedWavelet(s.clone())),
        };
        let order = digits
            .parse()
            .map_err(|_| Error::UnsupportedWavelet(s.clone()))?;
        build_wavelet(family, order)
    }
}
