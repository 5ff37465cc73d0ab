//! Denoising of uniformly sampled (1 Hz) air-temperature telemetry.
//!
//! Three methods are provided and compared on the same footing:
//!
//! * [`ma`]: the span-9 moving-average baseline,
//! * [`wavelet`]: orthonormal DWT with MAD noise estimation and universal soft thresholding,
//! * [`emd`]: empirical mode decomposition with CMSE mode selection and per-mode soft thresholding.
//!
//! [`metrics`] holds PRD, residual-noise sigma and the timing harness, and
//! [`pipeline`] is the batch front end used by the `denoise` binary.

pub mod denoise;
pub mod emd;
pub mod error;
pub mod ma;
pub mod metrics;
pub mod pipeline;
pub mod signal;
pub mod stats;
pub mod wavelet;

pub use denoise::{DenoiseResult, Method};
pub use error::{Error, Result};
pub use signal::{BoomTemperaturePair, ChannelId, Segment, Segmentation, Signal, SkippedRun};
