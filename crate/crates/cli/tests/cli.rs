use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use hdrqa_core::hdr_io::write_rgbe;
use hdrqa_core::HdrFrame;
use tempfile::TempDir;

fn hdrqa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hdrqa")).args(args).env_remove("HDRQA_THREADS").output().unwrap()
}

fn success(args: &[&str]) -> String {
    let out = hdrqa(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> (i32, String) {
    let out = hdrqa(args);
    (out.status.code().unwrap(), String::from_utf8_lossy(&out.stderr).into_owned())
}

fn write_seq(dir: &Path, frames: &[HdrFrame]) {
    fs::create_dir_all(dir).unwrap();
    for (i, f) in frames.iter().enumerate() {
        fs::write(dir.join(format!("frame_{i:05}.hdr")), write_rgbe(f)).unwrap();
    }
}

fn textured(dir: &Path) {
    let frames: Vec<HdrFrame> = (0..2)
        .map(|k| {
            HdrFrame::from_fn(48, 48, |x, y| {
                let v = 0.05 + 40.0 * ((x as f64 * 0.3 + k as f64).sin() * (y as f64 * 0.2).cos()).powi(2);
                [v, 0.9 * v, 0.7 * v]
            })
            .unwrap()
        })
        .collect();
    write_seq(dir, &frames);
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn metric_identity_rows_and_columns() {
    let tmp = TempDir::new().unwrap();
    let src = tmp.path().join("src");
    textured(&src);
    let out = tmp.path().join("out");
    success(&["--out-dir", p(&out), "metric", "--reference", p(&src), "--distorted", p(&src)]);
    let csv = fs::read_to_string(out.join("scores.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "frame,metric,adapter,score,params_hash");
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    // 2 frames + mean, 3 metrics, 2 adapters
    assert_eq!(rows.len(), 3 * 3 * 2);
    for r in &rows {
        let score: f64 = r[3].parse().unwrap();
        let want = if r[1] == "psnr" { 100.0 } else { 1.0 };
        assert!((score - want).abs() < 1e-6, "{r:?}");
    }
}

#[test]
fn metric_adapters_are_orthogonal() {
    let tmp = TempDir::new().unwrap();
    let src = tmp.path().join("src");
    textured(&src);
    for adapter in ["pu", "me"] {
        let out = tmp.path().join(adapter);
        success(&[
            "--out-dir",
            p(&out),
            "metric",
            "--reference",
            p(&src),
            "--distorted",
            p(&src),
            "--metric",
            "vif",
            "--adapter",
            adapter,
        ]);
        let csv = fs::read_to_string(out.join("scores.csv")).unwrap();
        assert!(csv.lines().skip(1).all(|l| l.contains(&format!(",vif,{adapter},"))), "{csv}");
    }
}

#[test]
fn salt_pepper_manifest_records_modified_pixels() {
    let tmp = TempDir::new().unwrap();
    let src = tmp.path().join("src");
    textured(&src);
    let out = tmp.path().join("out");
    success(&["--seed", "7", "--out-dir", p(&out), "distort", "--input", p(&src), "--kind", "salt_pepper"]);
    let manifest = fs::read_to_string(out.join("manifest.toml")).unwrap();
    // floor(0.02 * 48 * 48)
    assert!(manifest.contains("modified_pixels_per_frame = 46"), "{manifest}");
    assert!(manifest.contains("seed = 7"), "{manifest}");
}

#[test]
fn compression_points_to_external_encoder() {
    let tmp = TempDir::new().unwrap();
    let src = tmp.path().join("src");
    textured(&src);
    let (status, err) =
        code(&["--out-dir", p(&tmp.path().join("o")), "distort", "--input", p(&src), "--kind", "compression"]);
    assert_eq!(status, 1);
    assert!(err.contains("HEVC"), "{err}");
}

#[test]
fn display_sim_mid_gray_and_peak() {
    let tmp = TempDir::new().unwrap();
    let src = tmp.path().join("gray");
    write_seq(&src, &[HdrFrame::filled(32, 24, [0.18; 3]).unwrap()]);
    let out = tmp.path().join("out");
    let stdout = success(&["--out-dir", p(&out), "display-sim", "--input", p(&src)]);
    assert!(stdout.contains("sequence emitted max: 2700 cd/m2"), "{stdout}");
    let summary = fs::read_to_string(out.join("summary.csv")).unwrap();
    let row: Vec<&str> = summary.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[1].parse::<f64>().unwrap(), 0.0);
    for name in ["projector_00000.pgm", "lcd_00000.ppm", "emitted_00000.f32"] {
        assert!(out.join(name).is_file(), "{name}");
    }
}

fn analyze_inputs(dir: &Path, objective_clips: &[&str]) {
    let clips = ["a", "b", "c", "d"];
    let mut meta = String::from("clip,sequence,impairment,category,qp,bitrate_kbps\n");
    for (j, c) in clips.iter().enumerate() {
        meta += &if j < 2 {
            format!("{c},Table,awgn,non_compression,,\n")
        } else {
            format!("{c},Table,compression,compression,{},\n", [22, 27][j - 2])
        };
    }
    fs::write(dir.join("clips.csv"), meta).unwrap();
    let mut scores = String::from("subject,a,b,c,d\n");
    for i in 0..18 {
        let jitter = [-1, 0, 1][i % 3];
        scores += &format!("s{i},{},{},{},{}\n", 8 + jitter, 6 + jitter, 5 + jitter, 3 + jitter);
    }
    fs::write(dir.join("scores.csv"), scores).unwrap();
    let mut objective = String::from("clip,metric,score\n");
    for (j, c) in objective_clips.iter().enumerate() {
        objective += &format!("{c},PSNR (PU encoding),{}\n", 40.0 - 3.0 * j as f64);
    }
    fs::write(dir.join("objective.csv"), objective).unwrap();
}

fn analyze(dir: &Path) -> Output {
    hdrqa(&[
        "--out-dir",
        p(&dir.join("out")),
        "analyze",
        "--scores",
        p(&dir.join("scores.csv")),
        "--clips",
        p(&dir.join("clips.csv")),
        "--objective",
        p(&dir.join("objective.csv")),
    ])
}

#[test]
fn analyze_benign_panel_has_no_outliers() {
    let tmp = TempDir::new().unwrap();
    analyze_inputs(tmp.path(), &["a", "b", "c", "d"]);
    let out = analyze(tmp.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("0 outliers"));
    let mos = fs::read_to_string(tmp.path().join("out/mos.csv")).unwrap();
    assert_eq!(mos.lines().count(), 5);
}

#[test]
fn analyze_names_missing_clip() {
    let tmp = TempDir::new().unwrap();
    analyze_inputs(tmp.path(), &["a", "b", "c"]);
    let out = analyze(tmp.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains('d'));
}

#[test]
fn analyze_reports_schema_coordinates() {
    let tmp = TempDir::new().unwrap();
    analyze_inputs(tmp.path(), &["a", "b", "c", "d"]);
    let scores = fs::read_to_string(tmp.path().join("scores.csv")).unwrap().replacen("s1,8", "s1,eleven", 1);
    fs::write(tmp.path().join("scores.csv"), scores).unwrap();
    let out = analyze(tmp.path());
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3") && err.contains("column"), "{err}");
}

#[test]
fn exit_codes() {
    let tmp = TempDir::new().unwrap();
    assert_eq!(code(&["--no-such-flag"]).0, 1);
    assert_eq!(code(&["distort", "--input", "/no/such/dir", "--kind", "awgn"]).0, 2);
    let bad = tmp.path().join("bad.toml");
    fs::write(&bad, "schema_version = \"x\"").unwrap();
    assert_eq!(code(&["manifest", "validate", p(&bad)]).0, 2);
    // a flat reference carries no information, so VIF is undefined
    let flat = tmp.path().join("flat");
    write_seq(&flat, &[HdrFrame::filled(48, 48, [1.0; 3]).unwrap()]);
    let other = tmp.path().join("other");
    textured(&other);
    fs::remove_file(other.join("frame_00001.hdr")).unwrap();
    let (status, err) = code(&[
        "--out-dir",
        p(&tmp.path().join("o")),
        "metric",
        "--reference",
        p(&flat),
        "--distorted",
        p(&other),
        "--metric",
        "vif",
        "--adapter",
        "pu",
    ]);
    assert_eq!(status, 3, "{err}");
}
