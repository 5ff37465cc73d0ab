//! Signal representation, gap-aware segmentation and the cross-boom minimum.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Nominal spacing tolerance between consecutive 1 Hz samples, in seconds.
pub const DEFAULT_GAP_THRESHOLD: f64 = 1.5;
/// Shortest run that is denoised; shorter runs are reported as skipped.
pub const DEFAULT_MIN_SEGMENT_LEN: usize = 64;

/// One of the six kelvin-domain measurement channels (`k = 1..6`).
///
/// Channels 1-3 belong to boom 1 (tip, intermediate, base); 4-6 to boom 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ChannelId {
    Boom1Tip,
    Boom1Mid,
    Boom1Base,
    Boom2Tip,
    Boom2Mid,
    Boom2Base,
}

impl ChannelId {
    pub const ALL: [ChannelId; 6] = [
        ChannelId::Boom1Tip,
        ChannelId::Boom1Mid,
        ChannelId::Boom1Base,
        ChannelId::Boom2Tip,
        ChannelId::Boom2Mid,
        ChannelId::Boom2Base,
    ];

    /// 1-based channel index `k`.
    pub fn index(self) -> usize {
        self as usize + 1
    }

    pub fn from_index(k: usize) -> Option<Self> {
        Self::ALL.get(k.checked_sub(1)?).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            ChannelId::Boom1Tip => "b1_tip",
            ChannelId::Boom1Mid => "b1_mid",
            ChannelId::Boom1Base => "b1_base",
            ChannelId::Boom2Tip => "b2_tip",
            ChannelId::Boom2Mid => "b2_mid",
            ChannelId::Boom2Base => "b2_base",
        }
    }
}

impl fmt::Display for ChannelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ChannelId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if let Ok(k) = s.parse::<usize>() {
            return ChannelId::from_index(k)
                .ok_or_else(|| Error::Config(format!("channel index {k} outside 1..6")));
        }
        ChannelId::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown channel '{s}'")))
    }
}

/// A uniformly sampled kelvin series for one channel.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    channel: ChannelId,
    timestamps: Vec<f64>,
    samples: Vec<f64>,
    sol: Option<i64>,
}

impl Signal {
    pub fn new(channel: ChannelId, timestamps: Vec<f64>, samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptyInput);
        }
        if samples.len() != timestamps.len() {
            return Err(Error::LengthMismatch {
                left: timestamps.len(),
                right: samples.len(),
            });
        }
        if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidSignal(format!("non-finite sample at index {i}")));
        }
        if let Some(i) = timestamps.iter().position(|t| !t.is_finite()) {
            return Err(Error::InvalidSignal(format!("non-finite timestamp at index {i}")));
        }
        if let Some(i) = timestamps.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::InvalidSignal(format!(
                "timestamps not strictly increasing at index {}",
                i + 1
            )));
        }
        Ok(Signal {
            channel,
            timestamps,
            samples,
            sol: None,
        })
    }

    /// Builds a signal sampled at 1 Hz starting at t = 0.
    pub fn uniform(channel: ChannelId, samples: Vec<f64>) -> Result<Self> {
        let ts = (0..samples.len()).map(|i| i as f64).collect();
        Signal::new(channel, ts, samples)
    }

    pub fn with_sol(mut self, sol: i64) -> Self {
        self.sol = Some(sol);
        self
    }

    pub fn channel(&self) -> ChannelId {
        self.channel
    }

    pub fn timestamps(&self) -> &[f64] {
        &self.timestamps
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn sol(&self) -> Option<i64> {
        self.sol
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// A gap-free run of a parent signal, `start..end` in parent indices.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub channel: ChannelId,
    pub start: usize,
    pub end: usize,
    pub timestamps: Vec<f64>,
    pub samples: Vec<f64>,
}

impl Segment {
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }
}

/// A gap-free run that was too short to be denoised.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedRun {
    pub channel: ChannelId,
    pub start: usize,
    pub end: usize,
    pub reason: String,
}

impl SkippedRun {
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Segmentation {
    pub segments: Vec<Segment>,
    pub skipped: Vec<SkippedRun>,
}

impl Segmentation {
    /// Total number of parent samples accounted for (segments plus skipped runs).
    pub fn covered(&self) -> usize {
        self.segments.iter().map(Segment::len).sum::<usize>()
            + self.skipped.iter().map(SkippedRun::len).sum::<usize>()
    }
}

/// Splits `signal` at spacings larger than `gap_threshold` seconds.
///
/// Runs of at least `min_segment_len` samples become segments, shorter runs are
/// listed in [`Segmentation::skipped`]. Every sample lands in exactly one of the two.
pub fn segment(signal: &Signal, gap_threshold: f64, min_segment_len: usize) -> Segmentation {
    let ts = signal.timestamps();
    let mut out = Segmentation::default();
    let mut start = 0;
    for i in 1..=ts.len() {
        let boundary = i == ts.len() || ts[i] - ts[i - 1] > gap_threshold;
        if !boundary {
            continue;
        }
        let len = i - start;
        if len >= min_segment_len {
            out.segments.push(Segment {
                channel: signal.channel(),
                start,
                end: i,
                timestamps: ts[start..i].to_vec(),
                samples: signal.samples()[start..i].to_vec(),
            });
        } else {
            out.skipped.push(SkippedRun {
                channel: signal.channel(),
                start,
                end: i,
                reason: format!("run of {len} samples shorter than minimum {min_segment_len}"),
            });
        }
        start = i;
    }
    out
}

/// Per-boom ambient temperature estimates on a shared time base.
#[derive(Debug, Clone, PartialEq)]
pub struct BoomTemperaturePair {
    pub timestamps1: Vec<f64>,
    pub t1: Vec<f64>,
    pub timestamps2: Vec<f64>,
    pub t2: Vec<f64>,
}

impl BoomTemperaturePair {
    /// Pair on an implicit shared 1 Hz time base.
    pub fn untimed(t1: Vec<f64>, t2: Vec<f64>) -> Self {
        BoomTemperaturePair {
            timestamps1: (0..t1.len()).map(|i| i as f64).collect(),
            t1,
            timestamps2: (0..t2.len()).map(|i| i as f64).collect(),
            t2,
        }
    }

    pub fn timed(timestamps: Vec<f64>, t1: Vec<f64>, t2: Vec<f64>) -> Self {
        BoomTemperaturePair {
            timestamps1: timestamps.clone(),
            t1,
            timestamps2: timestamps,
            t2,
        }
    }
}

/// The colder of the two boom estimates at every sample.
pub fn min_combine(pair: &BoomTemperaturePair) -> Result<Vec<f64>> {
    if pair.t1.len() != pair.t2.len() {
        return Err(Error::LengthMismatch {
            left: pair.t1.len(),
            right: pair.t2.len(),
        });
    }
    if pair.timestamps1.len() != pair.t1.len() || pair.timestamps2.len() != pair.t2.len() {
        return Err(Error::LengthMismatch {
            left: pair.timestamps1.len(),
            right: pair.timestamps2.len(),
        });
    }
    if let Some(index) = pair
        .timestamps1
        .iter()
        .zip(&pair.timestamps2)
        .position(|(a, b)| a != b)
    {
        return Err(Error::Misaligned { index });
    }
    Ok(pair.t1.iter().zip(&pair.t2).map(|(a, b)| a.min(*b)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn with_gaps(runs: &[usize]) -> Signal {
        let mut ts = Vec::new();
        let mut t = 0.0;
        for &len in runs {
            for _ in 0..len {
                ts.push(t);
                t += 1.0;
            }
            t += 300.0;
        }
        let xs = (0..ts.len()).map(|i| 200.0 + i as f64 * 0.01).collect();
        Signal::new(ChannelId::Boom1Tip, ts, xs).unwrap()
    }

    #[test]
    fn rejects_bad_signals() {
        let c = ChannelId::Boom1Tip;
        assert!(matches!(Signal::new(c, vec![], vec![]), Err(Error::EmptyInput)));
        assert!(Signal::new(c, vec![0.0, 0.0], vec![1.0, 2.0]).is_err());
        assert!(Signal::new(c, vec![0.0, 1.0], vec![1.0, f64::NAN]).is_err());
        assert!(Signal::new(c, vec![0.0], vec![1.0, 2.0]).is_err());
    }

    #[test]
    fn single_run() {
        let s = segment(&with_gaps(&[200]), DEFAULT_GAP_THRESHOLD, DEFAULT_MIN_SEGMENT_LEN);
        assert_eq!(s.segments.len(), 1);
        assert_eq!(s.segments[0].len(), 200);
        assert!(s.skipped.is_empty());
    }

    #[test]
    fn gap_splits_into_two() {
        let s = segment(&with_gaps(&[100, 100]), 1.5, 64);
        let lens: Vec<_> = s.segments.iter().map(Segment::len).collect();
        assert_eq!(lens, vec![100, 100]);
        assert_eq!(s.segments[1].start, 100);
    }

    #[test]
    fn short_run_is_reported() {
        let s = segment(&with_gaps(&[100, 10]), 1.5, 64);
        assert_eq!(s.segments.len(), 1);
        assert_eq!(s.skipped.len(), 1);
        assert_eq!((s.skipped[0].start, s.skipped[0].end), (100, 110));
        assert_eq!(s.covered(), 110);
    }

    #[test]
    fn jitter_within_threshold_is_not_a_gap() {
        let ts = vec![0.0, 1.2, 2.0, 3.4, 4.4];
        let sig = Signal::new(ChannelId::Boom2Base, ts, vec![1.0; 5]).unwrap();
        let s = segment(&sig, 1.5, 2);
        assert_eq!(s.segments.len(), 1);
    }

    #[test]
    fn min_combine_examples() {
        let pair = BoomTemperaturePair::untimed(vec![200.0, 210.0], vec![205.0, 205.0]);
        assert_eq!(min_combine(&pair).unwrap(), vec![200.0, 205.0]);

        let same = BoomTemperaturePair::untimed(vec![190.0, 191.5], vec![190.0, 191.5]);
        assert_eq!(min_combine(&same).unwrap(), vec![190.0, 191.5]);

        let bad = BoomTemperaturePair::untimed(vec![180.0], vec![181.0, 182.0]);
        assert!(matches!(min_combine(&bad), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn min_combine_rejects_misaligned_time() {
        let pair = BoomTemperaturePair {
            timestamps1: vec![0.0, 1.0],
            t1: vec![1.0, 2.0],
            timestamps2: vec![0.0, 2.0],
            t2: vec![1.0, 2.0],
        };
        assert!(matches!(min_combine(&pair), Err(Error::Misaligned { index: 1 })));
    }

    #[test]
    fn channel_ids_round_trip() {
        for c in ChannelId::ALL {
            assert_eq!(ChannelId::from_index(c.index()), Some(c));
            assert_eq!(c.name().parse::<ChannelId>().unwrap(), c);
        }
        assert!("7".parse::<ChannelId>().is_err());
    }

    proptest! {
        #[test]
        fn segmentation_is_a_partition(runs in prop::collection::vec(1usize..150, 1..6), min_len in 1usize..100) {
            let sig = with_gaps(&runs);
            let s = segment(&sig, 1.5, min_len);
            let mut owner = vec![0u8; sig.len()];
            for seg in &s.segments {
                prop_assert!(seg.len() >= min_len);
                for i in seg.start..seg.end { owner[i] += 1; }
            }
            for run in &s.skipped {
                prop_assert!(run.len() < min_len);
                for i in run.start..run.end { owner[i] += 1; }
            }
            prop_assert!(owner.iter().all(|&c| c == 1));
        }

        #[test]
        fn resegmenting_concatenation_is_idempotent(runs in prop::collection::vec(1usize..150, 1..6), min_len in 1usize..100) {
            let s = segment(&with_gaps(&runs), 1.5, min_len);
            prop_assume!(!s.segments.is_empty());
            let ts: Vec<f64> = s.segments.iter().flat_map(|g| g.timestamps.clone()).collect();
            let xs: Vec<f64> = s.segments.iter().flat_map(|g| g.samples.clone()).collect();
            let again = segment(&Signal::new(ChannelId::Boom1Tip, ts, xs).unwrap(), 1.5, min_len);
            prop_assert!(again.skipped.is_empty());
            prop_assert_eq!(again.segments.len(), s.segments.len());
            for (a, b) in again.segments.iter().zip(&s.segments) {
                prop_assert_eq!(&a.samples, &b.samples);
                prop_assert_eq!(&a.timestamps, &b.timestamps);
            }
        }

        #[test]
        fn min_combine_symmetric_and_idempotent(a in prop::collection::vec(150.0f64..300.0, 1..50), seed in 0.0f64..10.0) {
            let b: Vec<f64> = a.iter().enumerate().map(|(i, v)| v + ((i as f64 + seed).sin() * 5.0)).collect();
            let ab = min_combine(&BoomTemperaturePair::untimed(a.clone(), b.clone())).unwrap();
            let ba = min_combine(&BoomTemperaturePair::untimed(b, a.clone())).unwrap();
            prop_assert_eq!(ab, ba);
            prop_assert_eq!(min_combine(&BoomTemperaturePair::untimed(a.clone(), a.clone())).unwrap(), a);
        }
    }
}
