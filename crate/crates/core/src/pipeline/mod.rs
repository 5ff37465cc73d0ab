//! Batch front end: ingest, segment, denoise per channel, combine booms, write outputs.

mod ingest;
mod mapping;
mod plot;

pub use ingest::{ingest, IngestStats, Ingested, AMBIENT_KEY, TIMESTAMP_KEY};
pub use mapping::{ColumnMapping, ColumnRef, Delimiter};
pub use plot::{emit_plot, render_svg};

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::denoise::{denoise, DenoiseConfig, DenoiseResult, Method};
use crate::error::{Error, Result};
use crate::metrics::{prd, residual_sigma};
use crate::signal::{self, min_combine, ChannelId, Segment};

const KELVIN_TO_CELSIUS: f64 = 273.15;

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub denoise: DenoiseConfig,
    pub inputs: Vec<PathBuf>,
    pub mapping: ColumnMapping,
    pub gap_threshold: f64,
    pub min_segment_len: usize,
    pub out_dir: PathBuf,
    /// JSON-lines record stream, one record per channel x segment.
    pub report_path: Option<PathBuf>,
    pub plot: bool,
    /// Compute report PRD on degrees Celsius instead of kelvin.
    pub report_celsius: bool,
}

impl PipelineConfig {
    pub fn new(denoise: DenoiseConfig, input: PathBuf, mapping: ColumnMapping, out_dir: PathBuf) -> Self {
        PipelineConfig {
            denoise,
            inputs: vec![input],
            mapping,
            gap_threshold: signal::DEFAULT_GAP_THRESHOLD,
            min_segment_len: signal::DEFAULT_MIN_SEGMENT_LEN,
            out_dir,
            report_path: None,
            plot: false,
            report_celsius: false,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.inputs.is_empty() {
            return Err(Error::Config("no input files".into()));
        }
        if self.gap_threshold.is_nan() || self.gap_threshold <= 0.0 {
            return Err(Error::Config(format!("gap threshold must be positive, got {}", self.gap_threshold)));
        }
        if self.min_segment_len == 0 {
            return Err(Error::Config("minimum segment length must be positive".into()));
        }
        let mut stems = BTreeSet::new();
        for input in &self.inputs {
            if !stems.insert(stem(input)) {
                return Err(Error::Config(format!("two inputs share the file stem '{}'", stem(input))));
            }
        }
        if let DenoiseConfig::Ma(cfg) = &self.denoise {
            cfg.validate()?;
        }
        if let DenoiseConfig::Hht(cfg) = &self.denoise {
            cfg.validate()?;
        }
        Ok(())
    }
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "input".to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SegmentStatus {
    Processed,
    Skipped,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentOutcome {
    pub start: usize,
    pub end: usize,
    pub t_start: f64,
    pub t_end: f64,
    pub status: SegmentStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub warnings: Vec<String>,
}

impl SegmentOutcome {
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelManifest {
    pub channel: ChannelId,
    pub samples_ingested: usize,
    pub samples_processed: usize,
    pub samples_skipped: usize,
    pub samples_failed: usize,
    /// Segments and skipped runs in time order.
    pub segments: Vec<SegmentOutcome>,
    pub outputs: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputManifest {
    pub path: String,
    pub sha256: String,
    pub ingest: IngestStats,
    pub channels: Vec<ChannelManifest>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub combined_output: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub method: Method,
    pub parameters: String,
    pub mapping: ColumnMapping,
    pub gap_threshold: f64,
    pub min_segment_len: usize,
    pub plot: bool,
    pub report_celsius: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub software: String,
    pub version: String,
    pub config: ConfigEcho,
    pub inputs: Vec<InputManifest>,
    pub notes: Vec<String>,
}

impl RunManifest {
    /// Whether every ingested sample is attributed to a processed, skipped or failed span.
    pub fn accounts_for_all_samples(&self) -> bool {
        self.inputs.iter().flat_map(|i| &i.channels).all(|c| {
            let spans: usize = c.segments.iter().map(SegmentOutcome::len).sum();
            spans == c.samples_ingested
                && c.samples_processed + c.samples_skipped + c.samples_failed == c.samples_ingested
        })
    }
}

/// One machine-readable record per channel x segment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentRecord {
    pub input: String,
    pub channel: ChannelId,
    pub segment: usize,
    pub start: usize,
    pub end: usize,
    pub method: Method,
    pub prd: f64,
    pub prd_units: String,
    pub residual_sigma: f64,
    pub n_samples: usize,
    pub elapsed: f64,
    pub config: String,
}

struct TaskOutput {
    result: Result<DenoiseResult>,
    elapsed: f64,
}

fn fmt_f64(v: f64) -> String {
    // shortest representation that round-trips
    format!("{v}")
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn digest(path: &Path) -> Result<String> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

fn segment_metrics(seg: &Segment, r: &DenoiseResult, celsius: bool) -> Result<(f64, f64)> {
    let sigma = if r.residual.len() >= 2 { residual_sigma(&r.residual)? } else { 0.0 };
    let p = if celsius {
        let x: Vec<f64> = seg.samples.iter().map(|v| v - KELVIN_TO_CELSIUS).collect();
        let y: Vec<f64> = r.denoised.iter().map(|v| v - KELVIN_TO_CELSIUS).collect();
        prd(&x, &y)?
    } else {
        prd(&seg.samples, &r.denoised)?
    };
    Ok((p, sigma))
}

/// Runs the configured method over every channel of every input and writes
/// outputs plus `manifest.json` into `out_dir`.
pub fn run_pipeline(cfg: &PipelineConfig) -> Result<RunManifest> {
    cfg.validate()?;
    fs::create_dir_all(&cfg.out_dir).map_err(|e| Error::io(&cfg.out_dir, e))?;
    let method = cfg.denoise.method();
    let parameters = cfg.denoise.summary();
    let mut manifest = RunManifest {
        software: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: ConfigEcho {
            method,
            parameters: parameters.clone(),
            mapping: cfg.mapping.clone(),
            gap_threshold: cfg.gap_threshold,
            min_segment_len: cfg.min_segment_len,
            plot: cfg.plot,
            report_celsius: cfg.report_celsius,
        },
        inputs: Vec::new(),
        notes: Vec::new(),
    };
    let mut records = String::new();

    for input in &cfg.inputs {
        let ingested = ingest(input, &cfg.mapping)?;
        let sha256 = digest(input)?;
        let prefix = stem(input);
        let segmentations: Vec<_> = ingested
            .signals
            .iter()
            .map(|s| signal::segment(s, cfg.gap_threshold, cfg.min_segment_len))
            .collect();

        let tasks: Vec<&Segment> = segmentations.iter().flat_map(|s| &s.segments).collect();
        // denoising is pure; outputs are gathered in task order before anything is written
        let outputs: Vec<TaskOutput> = tasks
            .par_iter()
            .map(|task| {
                let start = Instant::now();
                let result = denoise(&task.samples, &cfg.denoise);
                TaskOutput {
                    result,
                    elapsed: start.elapsed().as_secs_f64().max(1e-9),
                }
            })
            .collect();

        let mut input_manifest = InputManifest {
            path: input.display().to_string(),
            sha256,
            ingest: ingested.stats.clone(),
            channels: Vec::new(),
            combined_output: None,
        };
        let mut task_iter = tasks.iter().zip(outputs);

        for (signal, segmentation) in ingested.signals.iter().zip(&segmentations) {
            let channel = signal.channel();
            let base = format!("{prefix}.{channel}.{method}");
            let mut data = String::from("timestamp,raw,denoised,residual\n");
            let mut residual_out = String::from("timestamp,residual\n");
            let mut report = format!("segment,start,end,{}\n", crate::metrics::MetricsReport::DELIMITED_HEADER);
            let mut outcomes = Vec::new();
            let mut outputs_written = vec![
                format!("{base}.denoised.csv"),
                format!("{base}.residual.csv"),
                format!("{base}.report.csv"),
            ];

            for run in &segmentation.skipped {
                outcomes.push(SegmentOutcome {
                    start: run.start,
                    end: run.end,
                    t_start: signal.timestamps()[run.start],
                    t_end: signal.timestamps()[run.end - 1],
                    status: SegmentStatus::Skipped,
                    reason: Some(run.reason.clone()),
                    warnings: Vec::new(),
                });
            }

            for (index, seg) in segmentation.segments.iter().enumerate() {
                let (task, output) = task_iter.next().expect("one output per segment");
                debug_assert!(std::ptr::eq(*task, seg));
                let mut outcome = SegmentOutcome {
                    start: seg.start,
                    end: seg.end,
                    t_start: seg.timestamps[0],
                    t_end: *seg.timestamps.last().expect("segments are non-empty"),
                    status: SegmentStatus::Processed,
                    reason: None,
                    warnings: Vec::new(),
                };
                let result = match output.result {
                    Ok(r) => r,
                    Err(e) => {
                        outcome.status = SegmentStatus::Failed;
                        outcome.reason = Some(e.to_string());
                        outcomes.push(outcome);
                        continue;
                    }
                };
                let (p, sigma) = match segment_metrics(seg, &result, cfg.report_celsius) {
                    Ok(m) => m,
                    Err(e) => {
                        outcome.status = SegmentStatus::Failed;
                        outcome.reason = Some(format!("metrics: {e}"));
                        outcomes.push(outcome);
                        continue;
                    }
                };
                outcome.warnings = result.warnings.clone();
                for i in 0..seg.len() {
                    let t = fmt_f64(seg.timestamps[i]);
                    let _ = writeln!(
                        data,
                        "{t},{},{},{}",
                        fmt_f64(seg.samples[i]),
                        fmt_f64(result.denoised[i]),
                        fmt_f64(result.residual[i])
                    );
                    let _ = writeln!(residual_out, "{t},{}", fmt_f64(result.residual[i]));
                }
                let _ = writeln!(
                    report,
                    "{index},{},{},{},{:.6},{:.6},{},{:.6e},\"{}\"",
                    seg.start, seg.end, method, p, sigma, seg.len(), output.elapsed, parameters
                );
                let record = SegmentRecord {
                    input: input.display().to_string(),
                    channel,
                    segment: index,
                    start: seg.start,
                    end: seg.end,
                    method,
                    prd: p,
                    prd_units: if cfg.report_celsius { "celsius" } else { "kelvin" }.to_string(),
                    residual_sigma: sigma,
                    n_samples: seg.len(),
                    elapsed: output.elapsed,
                    config: parameters.clone(),
                };
                records.push_str(&serde_json::to_string(&record).expect("record serializes"));
                records.push('\n');

                if cfg.plot {
                    let name = format!("{base}.seg{index:03}.svg");
                    let title = format!("{prefix} {channel} {method} segment {index}");
                    if emit_plot(&seg.samples, &result.denoised, &result.residual, &title, &cfg.out_dir.join(&name))? {
                        outputs_written.push(name);
                    }
                }
                outcomes.push(outcome);
            }
            outcomes.sort_by_key(|o| o.start);

            write_file(&cfg.out_dir.join(format!("{base}.denoised.csv")), &data)?;
            write_file(&cfg.out_dir.join(format!("{base}.residual.csv")), &residual_out)?;
            write_file(&cfg.out_dir.join(format!("{base}.report.csv")), &report)?;

            let count = |status| {
                outcomes
                    .iter()
                    .filter(|o| o.status == status)
                    .map(SegmentOutcome::len)
                    .sum()
            };
            if cfg.plot && segmentation.segments.is_empty() {
                manifest
                    .notes
                    .push(format!("{prefix} {channel}: no processed segments, no plot written"));
            }
            input_manifest.channels.push(ChannelManifest {
                channel,
                samples_ingested: signal.len(),
                samples_processed: count(SegmentStatus::Processed),
                samples_skipped: count(SegmentStatus::Skipped),
                samples_failed: count(SegmentStatus::Failed),
                segments: outcomes,
                outputs: outputs_written,
            });
        }

        if let Some(pair) = &ingested.ambient {
            let combined = min_combine(pair)?;
            let name = format!("{prefix}.combined_min.csv");
            let mut text = String::from("timestamp,t1,t2,t_min\n");
            for (i, m) in combined.iter().enumerate() {
                let _ = writeln!(
                    text,
                    "{},{},{},{}",
                    fmt_f64(pair.timestamps1[i]),
                    fmt_f64(pair.t1[i]),
                    fmt_f64(pair.t2[i]),
                    fmt_f64(*m)
                );
            }
            write_file(&cfg.out_dir.join(&name), &text)?;
            input_manifest.combined_output = Some(name);
        }
        manifest.inputs.push(input_manifest);
    }

    if let Some(path) = &cfg.report_path {
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
        write_file(path, &records)?;
    }
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    write_file(&cfg.out_dir.join("manifest.json"), &(json + "\n"))?;
    Ok(manifest)
}
