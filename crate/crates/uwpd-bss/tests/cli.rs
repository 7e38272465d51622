use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use uwpd_bss::experiment::cmd_evaluate;
use uwpd_bss::manifest::Manifest;
use uwpd_bss::report::{MetricsRow, RunRecord};
use uwpd_bss::wav::{read_wav, write_wav};
use uwpd_bss_core::resample::decimate_to_8k;
use uwpd_bss_core::synth::{synth_source, SourceKind};
use uwpd_bss_core::{MixingMatrix, Signal};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_uwpd-bss"));
    c.env_remove("BSS_UWPD_SEED");
    c
}

fn run(cmd: &mut Command) -> Output {
    let out = cmd.output().unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn write_source(path: &Path, kind: SourceKind, n: usize, seed: u64, rate: u32) {
    let s = synth_source(kind, n, seed).unwrap();
    let s = Signal::new(s.scaled(0.5 / s.peak()).into_samples(), rate).unwrap();
    write_wav(path, &s).unwrap();
}

fn burst_files(dir: &Path) -> [PathBuf; 2] {
    let paths = [dir.join("s1.wav"), dir.join("s2.wav")];
    for (i, (p, c)) in paths.iter().zip([2650.0, 2850.0]).enumerate() {
        write_source(
            p,
            SourceKind::BurstsInNoise {
                carrier_hz: c,
                noise_std: 1.25,
            },
            16384,
            i as u64,
            8000,
        );
    }
    paths
}

fn records(path: &Path) -> Vec<RunRecord> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

#[test]
fn mix_one_second_files_and_invert() {
    let d = tempfile::tempdir().unwrap();
    let (a, b) = (d.path().join("a.wav"), d.path().join("b.wav"));
    write_source(&a, SourceKind::Laplacian, 16000, 1, 16000);
    write_source(&b, SourceKind::Uniform, 16000, 2, 16000);
    let out = d.path().join("mix");
    run(bin()
        .args(["mix", "--sources"])
        .arg(&a)
        .arg(&b)
        .args(["--matrix", "2,1,1,1", "--out"])
        .arg(&out));

    let m: Manifest =
        serde_json::from_str(&std::fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(m.matrix, [[2.0, 1.0], [1.0, 1.0]]);
    assert_eq!(m.length, 8000);
    let x = [
        read_wav(&out.join("mix1.wav")).unwrap(),
        read_wav(&out.join("mix2.wav")).unwrap(),
    ];
    assert_eq!(x[0].len(), 8000);
    assert_eq!(x[0].sample_rate_hz(), 8000);

    // undo the joint scale and the mixing, compare with the decimated sources
    let inv = MixingMatrix::new(m.matrix).unwrap().inverse();
    let s = [
        decimate_to_8k(&read_wav(&a).unwrap()).unwrap(),
        decimate_to_8k(&read_wav(&b).unwrap()).unwrap(),
    ];
    let mut worst = 0.0f64;
    for t in 0..8000 {
        let y = inv.apply([x[0].samples()[t] / m.scale, x[1].samples()[t] / m.scale]);
        worst = worst
            .max((y[0] - s[0].samples()[t]).abs())
            .max((y[1] - s[1].samples()[t]).abs());
    }
    assert!(worst < 1e-3, "{worst}");
}

#[test]
fn separate_records_and_determinism() {
    let d = tempfile::tempdir().unwrap();
    let src = burst_files(d.path());
    let mixdir = d.path().join("mix");
    run(bin()
        .args(["mix", "--sources"])
        .arg(&src[0])
        .arg(&src[1])
        .arg("--out")
        .arg(&mixdir));
    let (m1, m2) = (mixdir.join("mix1.wav"), mixdir.join("mix2.wav"));

    let sep = |method: &str, out: &str, seed: &str| {
        let dir = d.path().join(out);
        run(bin()
            .args(["separate", "--mixtures"])
            .arg(&m1)
            .arg(&m2)
            .args(["--method", method, "--seed", seed, "--out"])
            .arg(&dir));
        dir
    };
    let p = sep("proposed", "p1", "7");
    let r = records(&p.join("runs.jsonl"));
    assert_eq!(r.len(), 1);
    assert_eq!(r[0].method, "proposed");
    assert_eq!(r[0].seed, 7);
    assert!(r[0].selected_node.is_some());
    assert!(p.join("est1.wav").exists() && p.join("est2.wav").exists());

    let s = sep("sobi", "s1", "7");
    let line = std::fs::read_to_string(s.join("runs.jsonl")).unwrap();
    assert!(!line.contains("selected_node"));

    let again = sep("proposed", "p2", "7");
    for f in ["est1.wav", "est2.wav"] {
        assert_eq!(
            std::fs::read(p.join(f)).unwrap(),
            std::fs::read(again.join(f)).unwrap()
        );
    }

    // a second run into the same directory appends
    sep("fastica", "p1", "7");
    assert_eq!(records(&p.join("runs.jsonl")).len(), 2);
}

#[test]
fn seed_falls_back_to_environment() {
    let d = tempfile::tempdir().unwrap();
    let src = burst_files(d.path());
    let out = d.path().join("o");
    run(bin()
        .env("BSS_UWPD_SEED", "123")
        .args(["experiment", "--method", "fastica", "--sources"])
        .arg(&src[0])
        .arg(&src[1])
        .arg("--out")
        .arg(&out));
    assert_eq!(records(&out.join("runs.jsonl"))[0].seed, 123);
}

#[test]
fn evaluate_perfect_estimates() {
    let d = tempfile::tempdir().unwrap();
    let src = burst_files(d.path());
    let out = run(bin()
        .args(["evaluate", "--json", "--estimates"])
        .arg(&src[0])
        .arg(&src[1])
        .arg("--references")
        .arg(&src[0])
        .arg(&src[1]));
    let rows: Vec<MetricsRow> = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(rows.len(), 3);
    for r in &rows {
        assert_eq!(r.sir_db, 300.0);
        assert_eq!(r.sdr_db, 300.0);
        assert_eq!(r.seg_snr_db, 35.0);
    }
    let text = run(bin()
        .args(["evaluate", "--estimates"])
        .arg(&src[0])
        .arg(&src[1])
        .arg("--references")
        .arg(&src[0])
        .arg(&src[1]));
    assert!(String::from_utf8(text.stdout).unwrap().contains("Average"));
}

#[test]
fn experiment_report_matches_files() {
    let d = tempfile::tempdir().unwrap();
    let src = burst_files(d.path());
    let out = d.path().join("exp");
    let stdout = run(bin()
        .args(["experiment", "--sources"])
        .arg(&src[0])
        .arg(&src[1])
        .arg("--out")
        .arg(&out))
    .stdout;
    let text = String::from_utf8(stdout).unwrap();
    assert_eq!(
        text,
        std::fs::read_to_string(out.join("report.txt")).unwrap()
    );

    let rows: Vec<MetricsRow> = std::fs::read_to_string(out.join("report.jsonl"))
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(rows.len(), 9);
    for method in ["proposed", "fastica", "sobi"] {
        let mine: Vec<&MetricsRow> = rows.iter().filter(|r| r.method == method).collect();
        let est = [
            out.join(method).join("est1.wav"),
            out.join(method).join("est2.wav"),
        ];
        let refs = [out.join("ref1.wav"), out.join("ref2.wav")];
        let report = cmd_evaluate([&est[0], &est[1]], [&refs[0], &refs[1]]).unwrap();
        for (row, m) in mine.iter().zip(&report.per_source) {
            assert!((row.sir_db - m.sir_db).abs() < 1e-12);
            assert!((row.sdr_db - m.sdr_db).abs() < 1e-12);
            assert!((row.seg_snr_db - m.seg_snr_db).abs() < 1e-12);
            assert!((row.overall_snr_db - m.overall_snr_db).abs() < 1e-12);
        }
        let avg = mine[2];
        assert_eq!(avg.source, "Average");
        assert!((avg.sir_db - (mine[0].sir_db + mine[1].sir_db) / 2.0).abs() < 1e-9);
    }
    // proposed and plain FastICA both clear 30 dB on these sources
    for r in rows
        .iter()
        .filter(|r| r.method != "sobi" && r.source != "Average")
    {
        assert!(r.sir_db > 30.0, "{r:?}");
    }
}

#[test]
fn single_method_report() {
    let d = tempfile::tempdir().unwrap();
    let src = burst_files(d.path());
    let out = d.path().join("exp");
    let stdout = run(bin()
        .args(["experiment", "--method", "sobi", "--sources"])
        .arg(&src[0])
        .arg(&src[1])
        .arg("--out")
        .arg(&out))
    .stdout;
    let text = String::from_utf8(stdout).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert!(text.contains("sobi") && !text.contains("fastica") && !text.contains("proposed"));
    assert!(!out.join("proposed").exists());
}

#[test]
fn missing_input_writes_nothing() {
    let d = tempfile::tempdir().unwrap();
    let src = burst_files(d.path());
    let out = d.path().join("exp");
    let o = bin()
        .args(["experiment", "--sources"])
        .arg(&src[0])
        .arg(d.path().join("missing.wav"))
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing.wav"));
    assert!(!out.exists());
}

#[test]
fn rejects_bad_flags() {
    let o = bin()
        .args([
            "mix",
            "--sources",
            "a.wav",
            "b.wav",
            "--matrix",
            "1,1,1,1",
            "--out",
            "x",
        ])
        .output()
        .unwrap();
    assert!(!o.status.success());
    let o = bin()
        .args([
            "separate",
            "--mixtures",
            "a.wav",
            "b.wav",
            "--lags",
            "0-3",
            "--out",
            "x",
        ])
        .output()
        .unwrap();
    assert!(!o.status.success());
}

#[test]
fn tree_and_synth() {
    let out = run(bin().arg("tree"));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 17);
    assert!(text.lines().next().unwrap().starts_with("5 0 0 125"));

    let d = tempfile::tempdir().unwrap();
    let p = d.path().join("s.wav");
    run(bin()
        .args([
            "synth", "--kind", "ar1", "--pole", "0.5", "--length", "1000", "--out",
        ])
        .arg(&p));
    let s = read_wav(&p).unwrap();
    assert_eq!((s.len(), s.sample_rate_hz()), (1000, 8000));
    assert!((s.peak() - 0.9).abs() < 1e-4);
}
