use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use ats_denoise::denoise::DenoiseConfig;
use ats_denoise::emd::SiftConfig;
use ats_denoise::ma::{MaConfig, MaMode};
use ats_denoise::pipeline::{run_pipeline, ColumnMapping, PipelineConfig};
use ats_denoise::signal::{DEFAULT_GAP_THRESHOLD, DEFAULT_MIN_SEGMENT_LEN};
use ats_denoise::wavelet::WaveletSpec;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Ma,
    Dwt,
    Hht,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MaModeArg {
    Centered,
    Causal,
}

/// Denoise 1 Hz temperature telemetry with a moving average, wavelet shrinkage or EMD shrinkage.
#[derive(Debug, Parser)]
#[command(name = "denoise", version)]
struct Cli {
    #[arg(long, value_enum)]
    method: MethodArg,

    /// Delimited input table (repeatable).
    #[arg(long, required = true)]
    input: Vec<PathBuf>,

    /// Column mapping file (key = value lines).
    #[arg(long)]
    map: PathBuf,

    /// Output directory.
    #[arg(long)]
    out: PathBuf,

    /// Write one JSON record per channel x segment to this path.
    #[arg(long)]
    report: Option<PathBuf>,

    /// Write an SVG overlay per processed segment.
    #[arg(long)]
    plot: bool,

    /// Report PRD on degrees Celsius rather than kelvin.
    #[arg(long)]
    report_celsius: bool,

    #[arg(long, default_value_t = 9)]
    span: usize,

    #[arg(long, value_enum, default_value = "centered")]
    ma_mode: MaModeArg,

    #[arg(long, default_value = "coif5")]
    wavelet: String,

    /// Decomposition depth: `auto` or a level count.
    #[arg(long, default_value = "auto")]
    levels: String,

    #[arg(long, default_value_t = 0.05)]
    emd_theta1: f64,

    #[arg(long, default_value_t = 0.5)]
    emd_theta2: f64,

    #[arg(long, default_value_t = 0.05)]
    emd_alpha: f64,

    #[arg(long, default_value_t = 1000)]
    max_siftings: usize,

    #[arg(long, default_value_t = 32)]
    max_imfs: usize,

    /// Largest spacing (seconds) still treated as contiguous.
    #[arg(long, default_value_t = DEFAULT_GAP_THRESHOLD)]
    gap_threshold: f64,

    #[arg(long = "min-segment", default_value_t = DEFAULT_MIN_SEGMENT_LEN)]
    min_segment: usize,
}

fn build_config(cli: &Cli) -> ats_denoise::Result<PipelineConfig> {
    let denoise = match cli.method {
        MethodArg::Ma => DenoiseConfig::Ma(MaConfig {
            span: cli.span,
            mode: match cli.ma_mode {
                MaModeArg::Centered => MaMode::Centered,
                MaModeArg::Causal => MaMode::Causal,
            },
        }),
        MethodArg::Dwt => {
            let levels = match cli.levels.as_str() {
                "auto" => None,
                j => Some(j.parse().map_err(|_| {
                    ats_denoise::Error::Config(format!("--levels expects 'auto' or a positive integer, got '{j}'"))
                })?),
            };
            DenoiseConfig::Dwt {
                wavelet: cli.wavelet.parse::<WaveletSpec>()?,
                levels,
            }
        }
        MethodArg::Hht => DenoiseConfig::Hht(SiftConfig {
            theta1: cli.emd_theta1,
            theta2: cli.emd_theta2,
            alpha: cli.emd_alpha,
            max_siftings: cli.max_siftings,
            max_imfs: cli.max_imfs,
        }),
    };
    Ok(PipelineConfig {
        denoise,
        inputs: cli.input.clone(),
        mapping: ColumnMapping::from_file(&cli.map)?,
        gap_threshold: cli.gap_threshold,
        min_segment_len: cli.min_segment,
        out_dir: cli.out.clone(),
        report_path: cli.report.clone(),
        plot: cli.plot,
        report_celsius: cli.report_celsius,
    })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = build_config(&cli).and_then(|cfg| run_pipeline(&cfg));
    match result {
        Ok(manifest) => {
            for input in &manifest.inputs {
                for ch in &input.channels {
                    log::info!(
                        "{} {}: {} processed, {} skipped, {} failed",
                        input.path,
                        ch.channel,
                        ch.samples_processed,
                        ch.samples_skipped,
                        ch.samples_failed
                    );
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("denoise: {e}");
            ExitCode::from(2)
        }
    }
}
