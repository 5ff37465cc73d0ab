use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ats_denoise::pipeline::{RunManifest, SegmentRecord, SegmentStatus};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn denoise(args: &[&str], input: &Path, map: &Path, out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_denoise"))
        .args(args)
        .arg("--input")
        .arg(input)
        .arg("--map")
        .arg(map)
        .arg("--out")
        .arg(out)
        .output()
        .unwrap()
}

fn manifest(out: &Path) -> RunManifest {
    serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap()
}

#[test]
fn writes_series_report_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("records.jsonl");
    let out = dir.path().join("out");
    let res = denoise(
        &["--method", "dwt", "--report", report.to_str().unwrap()],
        &fixture("gapped_sol.csv"),
        &fixture("gapped_sol.map"),
        &out,
    );
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));

    for channel in ["b1_tip", "b2_tip"] {
        for kind in ["denoised", "residual", "report"] {
            assert!(out.join(format!("gapped_sol.{channel}.dwt.{kind}.csv")).is_file());
        }
    }
    let data = fs::read_to_string(out.join("gapped_sol.b1_tip.dwt.denoised.csv")).unwrap();
    assert_eq!(data.lines().next(), Some("timestamp,raw,denoised,residual"));

    let m = manifest(&out);
    assert!(m.accounts_for_all_samples());
    assert_eq!(m.inputs[0].sha256.len(), 64);
    let b1 = &m.inputs[0].channels[0];
    // sentinel row removed, the 40-sample run is too short
    assert_eq!(b1.samples_ingested, 3339);
    assert_eq!(b1.samples_skipped, 40);
    let processed: Vec<_> = b1
        .segments
        .iter()
        .filter(|s| s.status == SegmentStatus::Processed)
        .collect();
    assert_eq!(processed.len(), 3);

    let records: Vec<SegmentRecord> = fs::read_to_string(&report)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    let expected: usize = m.inputs[0]
        .channels
        .iter()
        .map(|c| c.segments.iter().filter(|s| s.status == SegmentStatus::Processed).count())
        .sum();
    assert_eq!(records.len(), expected);
    assert!(records.iter().all(|r| r.residual_sigma > 0.03 && r.residual_sigma < 0.15));
}

#[test]
fn combined_output_needs_both_ambient_columns() {
    let dir = tempfile::tempdir().unwrap();
    let with = dir.path().join("with");
    assert!(denoise(&["--method", "ma"], &fixture("gapped_sol.csv"), &fixture("gapped_sol.map"), &with)
        .status
        .success());
    assert!(with.join("gapped_sol.combined_min.csv").is_file());
    assert!(manifest(&with).inputs[0].combined_output.is_some());

    let map = dir.path().join("no_ambient.map");
    fs::write(&map, "timestamp = SCLK\nchannel.1 = ATS1_TIP\nsentinel = -9999\n").unwrap();
    let without = dir.path().join("without");
    assert!(denoise(&["--method", "ma"], &fixture("gapped_sol.csv"), &map, &without)
        .status
        .success());
    assert!(!without.join("gapped_sol.combined_min.csv").exists());
    assert!(manifest(&without).inputs[0].combined_output.is_none());
}

#[test]
fn short_runs_only_are_all_skipped() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bursts.csv");
    let mut text = String::from("t,temp\n");
    for burst in 0..5 {
        for k in 0..20 {
            text.push_str(&format!("{},{}\n", burst * 100 + k, 210.0 + k as f64 * 0.01));
        }
    }
    fs::write(&input, text).unwrap();
    let map = dir.path().join("bursts.map");
    fs::write(&map, "timestamp = t\nchannel.1 = temp\n").unwrap();
    let out = dir.path().join("out");
    let res = denoise(&["--method", "hht"], &input, &map, &out);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));

    let data = fs::read_to_string(out.join("bursts.b1_tip.hht.denoised.csv")).unwrap();
    assert_eq!(data.lines().count(), 1);
    let m = manifest(&out);
    let c = &m.inputs[0].channels[0];
    assert_eq!(c.samples_skipped, 100);
    assert_eq!(c.samples_processed, 0);
    assert_eq!(c.segments.len(), 5);
    assert!(m.accounts_for_all_samples());
}

#[test]
fn unknown_column_fails() {
    let dir = tempfile::tempdir().unwrap();
    let map = dir.path().join("bad.map");
    fs::write(&map, "timestamp = SCLK\nchannel.1 = NOT_THERE\n").unwrap();
    let res = denoise(&["--method", "ma"], &fixture("gapped_sol.csv"), &map, &dir.path().join("out"));
    assert!(!res.status.success());
    assert!(String::from_utf8_lossy(&res.stderr).contains("NOT_THERE"));
}

#[test]
fn bad_arguments_fail() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let csv = fixture("gapped_sol.csv");
    let map = fixture("gapped_sol.map");
    assert!(!denoise(&["--method", "dwt", "--wavelet", "bior2.2"], &csv, &map, &out).status.success());
    assert!(!denoise(&["--method", "ma", "--span", "4"], &csv, &map, &out).status.success());
    assert!(!denoise(&["--method", "hht", "--emd-theta1", "0.7"], &csv, &map, &out).status.success());
    assert!(!denoise(&["--method", "ma"], &dir.path().join("missing.csv"), &map, &out).status.success());
    assert!(!denoise(&["--method", "fft"], &csv, &map, &out).status.success());
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for out in [&a, &b] {
        assert!(denoise(&["--method", "hht"], &fixture("gapped_sol.csv"), &fixture("gapped_sol.map"), out)
            .status
            .success());
    }
    for name in [
        "gapped_sol.b1_tip.hht.denoised.csv",
        "gapped_sol.b2_tip.hht.residual.csv",
        "gapped_sol.combined_min.csv",
        "manifest.json",
    ] {
        assert_eq!(fs::read(a.join(name)).unwrap(), fs::read(b.join(name)).unwrap(), "{name}");
    }
}

#[test]
fn plots_one_svg_per_processed_segment() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    assert!(denoise(
        &["--method", "ma", "--plot"],
        &fixture("gapped_sol.csv"),
        &fixture("gapped_sol.map"),
        &out
    )
    .status
    .success());
    let m = manifest(&out);
    for c in &m.inputs[0].channels {
        let processed = c.segments.iter().filter(|s| s.status == SegmentStatus::Processed).count();
        let svgs: Vec<_> = c.outputs.iter().filter(|o| o.ends_with(".svg")).collect();
        assert_eq!(svgs.len(), processed);
        for svg in svgs {
            let text = fs::read_to_string(out.join(svg)).unwrap();
            assert!(text.starts_with("<?xml") && text.contains("<svg") && text.trim_end().ends_with("</svg>"));
        }
    }
}

#[test]
fn methods_share_an_output_directory() {
    let dir = tempfile::tempdir().unwrap();
    for method in ["ma", "dwt"] {
        assert!(denoise(&["--method", method], &fixture("gapped_sol.csv"), &fixture("gapped_sol.map"), dir.path())
            .status
            .success());
    }
    let ma = fs::read_to_string(dir.path().join("gapped_sol.b1_tip.ma.denoised.csv")).unwrap();
    let dwt = fs::read_to_string(dir.path().join("gapped_sol.b1_tip.dwt.denoised.csv")).unwrap();
    assert_ne!(ma, dwt);
}

#[test]
fn celsius_reporting_changes_prd_only() {
    let dir = tempfile::tempdir().unwrap();
    let read = |celsius: bool| {
        let out = dir.path().join(if celsius { "c" } else { "k" });
        let report = out.with_extension("jsonl");
        let mut args = vec!["--method", "dwt", "--report", report.to_str().unwrap()];
        if celsius {
            args.push("--report-celsius");
        }
        assert!(denoise(&args, &fixture("gapped_sol.csv"), &fixture("gapped_sol.map"), &out)
            .status
            .success());
        let first = fs::read_to_string(&report).unwrap();
        let r: SegmentRecord = serde_json::from_str(first.lines().next().unwrap()).unwrap();
        r
    };
    let kelvin = read(false);
    let celsius = read(true);
    assert_eq!(kelvin.residual_sigma, celsius.residual_sigma);
    assert_eq!(celsius.prd_units, "celsius");
    assert!(celsius.prd > kelvin.prd);
}
